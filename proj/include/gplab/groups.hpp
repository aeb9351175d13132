#ifndef GPLAB_GROUPS_HPP
#define GPLAB_GROUPS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gplab/errors.hpp"

namespace gplab {

// A finite group as a validated multiplication table.  Elements are the
// indices 0..order-1; table[g][h] = g*h.
struct FiniteGroup {
    uint32_t order = 0;
    std::vector<std::vector<uint32_t>> table;
    std::vector<std::string> labels;
    uint32_t identity = 0;
    std::vector<uint32_t> inverse;

    uint32_t mul(uint32_t g, uint32_t h) const { return table[g][h]; }
    uint32_t inv(uint32_t g) const { return inverse[g]; }
    uint32_t conj(uint32_t g, uint32_t x) const {  // g * x * g^-1
        return mul(mul(g, x), inv(g));
    }
};

// Validates closure (Latin square with entries < n), associativity on all
// triples, a two-sided identity, and inverses.
FiniteGroup make_group(std::vector<std::vector<uint32_t>> table,
                       std::vector<std::string> labels = {});

FiniteGroup cyclic_group(uint32_t n);
FiniteGroup product_group(const FiniteGroup& a, const FiniteGroup& b);

// A subgroup, stored as a sorted element list plus a membership bitmap.
struct Subgroup {
    std::vector<uint32_t> elems;           // sorted ascending
    std::vector<bool> in;                  // size = parent order

    bool contains(uint32_t g) const { return in[g]; }
    uint32_t size() const { return static_cast<uint32_t>(elems.size()); }
};

Subgroup subgroup_from(const FiniteGroup& G, std::vector<uint32_t> elems);
Subgroup closure_subgroup(const FiniteGroup& G, const std::vector<uint32_t>& gens);
Subgroup whole_subgroup(const FiniteGroup& G);
Subgroup trivial_subgroup(const FiniteGroup& G);

// All subgroups, sorted by (order, element list).  Throws CapExceeded when
// |G| exceeds caps.max_group_order.
std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& G, const Caps& caps = {});

// Is N normal in H?  Both must be subgroups of G, N ⊆ H.
bool is_normal(const FiniteGroup& G, const Subgroup& N, const Subgroup& H);

// Normal subgroups of H (as subgroups of G), sorted by (order, elements).
std::vector<Subgroup> normal_subgroups_of(const FiniteGroup& G, const Subgroup& H,
                                          const Caps& caps = {});

struct QuotientGroup {
    FiniteGroup group;                  // the quotient G/N
    std::vector<uint32_t> projection;   // element of G -> coset index
    std::vector<uint32_t> coset_rep;    // coset index -> least representative
};

// Throws InputError if N is not normal in G.
QuotientGroup quotient_group(const FiniteGroup& G, const Subgroup& N);

Subgroup centralizer(const FiniteGroup& G, uint32_t g);

// FC-center: elements with finite conjugacy class; the whole group when G is
// finite, computed anyway from conjugacy classes for cross-checking.
Subgroup fc_center(const FiniteGroup& G);

// Smallest subgroup of H containing X and normal in H.
Subgroup normal_closure(const FiniteGroup& G, const Subgroup& H,
                        const std::vector<uint32_t>& X);

// ---------------------------------------------------------------------------
// Symbolic groups: a small closed catalog used where no finite table exists.

struct SymbolicGroup;

struct SymTrivial {};
struct SymCyclic {
    uint32_t n;
};
struct SymFiniteTable {
    std::shared_ptr<FiniteGroup> group;
};
struct SymIntegerLattice {
    uint32_t rank;
};
struct SymFree {
    uint32_t rank;
};
struct SymProduct {
    std::vector<SymbolicGroup> factors;
};

struct SymbolicGroup {
    std::variant<SymTrivial, SymCyclic, SymFiniteTable, SymIntegerLattice, SymFree,
                 SymProduct>
        node;
};

// Grammar: expr := atom ('x' atom)* ; atom := 'Z' ['^' int] | 'C' int
//                  | 'F' int | '1'.  Whitespace-insensitive.
SymbolicGroup parse_symbolic_group(const std::string& expr);
std::string symbolic_to_string(const SymbolicGroup& g);

struct GroupPredicates {
    bool is_torsion_free;
    bool is_ordered;   // admits a total order compatible with multiplication
    bool has_nontrivial_finite_normal_subgroup;
    bool is_finite;
};

GroupPredicates symbolic_predicates(const SymbolicGroup& g);

// Concrete table for a finite symbolic group; InputError when infinite.
FiniteGroup symbolic_to_table(const SymbolicGroup& g);

}  // namespace gplab

#endif
