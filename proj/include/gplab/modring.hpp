#ifndef GPLAB_MODRING_HPP
#define GPLAB_MODRING_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gplab/errors.hpp"
#include "gplab/zmod.hpp"

namespace gplab {

using zmod::Mat;
using zmod::Vec;

// A finite ring presented by structure constants over Z/m: the additive
// group is (Z/m)^rank and table[i*rank+j] holds the coefficients of b_i*b_j.
// Associativity is verified on all basis triples at construction; rings are
// not assumed unital.
struct FiniteRing {
    uint32_t modulus = 2;
    uint32_t rank = 1;
    std::vector<Vec> table;                      // rank*rank rows of length rank
    std::vector<std::vector<uint32_t>> support;  // nonzero indices per product
    std::vector<std::string> labels;
    std::optional<Vec> unit;

    const Vec& basis_product(uint32_t i, uint32_t j) const { return table[i * rank + j]; }
    Vec zero() const { return Vec(rank, 0); }
    Vec basis(uint32_t i) const {
        Vec v(rank, 0);
        v[i] = 1 % modulus;
        return v;
    }
    Vec mul(const Vec& a, const Vec& b) const;
    Vec mul_basis_left(uint32_t i, const Vec& b) const;   // b_i * b
    Vec mul_basis_right(const Vec& a, uint32_t j) const;  // a * b_j

    // m^rank, saturating at UINT64_MAX
    uint64_t element_count() const;
};

FiniteRing make_ring(uint32_t modulus, uint32_t rank, std::vector<Vec> table,
                     std::vector<std::string> labels = {},
                     std::optional<Vec> unit = std::nullopt);

FiniteRing zmod_ring(uint32_t m);                                   // Z/m
FiniteRing matrix_ring(const FiniteRing& base, uint32_t n);         // M_n(base)
FiniteRing direct_sum_ring(const std::vector<FiniteRing>& parts);   // same modulus

// ---------------------------------------------------------------------------

// A submodule of (Z/m)^ncols in canonical Howell form.  Equal submodules
// compare equal as values.
struct Submodule {
    uint32_t modulus = 2;
    uint32_t ncols = 0;
    Mat rows;  // canonical

    bool contains(const Vec& v) const { return zmod::member(rows, v, modulus); }
    bool is_zero() const { return rows.empty(); }
    uint64_t size() const { return zmod::span_size(rows, modulus); }
    bool subset_of(const Submodule& o) const {
        return zmod::span_subset(rows, o.rows, modulus);
    }
    bool operator==(const Submodule& o) const {
        return modulus == o.modulus && ncols == o.ncols && rows == o.rows;
    }
    bool operator<(const Submodule& o) const;  // deterministic total order
};

Submodule span_submodule(uint32_t m, uint32_t ncols, Mat gens);
Submodule zero_submodule(uint32_t m, uint32_t ncols);
Submodule full_submodule(uint32_t m, uint32_t ncols);
Submodule submodule_sum(const Submodule& a, const Submodule& b);
Submodule submodule_intersect(const Submodule& a, const Submodule& b);

// Enumerate the elements of a submodule in a fixed deterministic order
// (starts at zero); stops when f returns false.
void for_each_submodule_element(const Submodule& s,
                                const std::function<bool(const Vec&)>& f);

// The two-sided ideal generated by `gens`:
// span{ g, g*b_i, b_i*g, b_i*g*b_j }.
Submodule ideal_from_gens(const FiniteRing& R, const Mat& gens);
Submodule principal_ideal(const FiniteRing& R, const Vec& a);

// span of pairwise products; for ideals this is the ideal product IJ.
Submodule submodule_product(const FiniteRing& R, const Submodule& A, const Submodule& B);

Submodule annihilator_right(const FiniteRing& R, const Submodule& U);  // {x : Ux=0}
Submodule annihilator_left(const FiniteRing& R, const Submodule& U);   // {x : xU=0}

// Identity element of the (sub)ring spanned by T, if one exists.  For finite
// rings s-unitality is equivalent to having an identity, so this doubles as
// the s-unitality test for subrings.
std::optional<Vec> local_identity(const FiniteRing& R, const Submodule& T);

struct SUnitalReport {
    bool s_unital;
    std::optional<Vec> identity;  // present when s_unital
    std::optional<Vec> violator;  // some r outside rS ∩ Sr when not
};
SUnitalReport is_s_unital(const FiniteRing& R, const Caps& caps = {});

struct PrimeReport {
    bool holds;                           // prime (resp. semiprime)
    std::optional<Vec> witness_a, witness_b;  // ideal(a)*ideal(b) = 0 on failure
    uint64_t scanned = 0;                 // generator candidates examined
};

// Exact primeness: S is prime iff no pair of nonzero ideals multiplies to
// zero.  The search space is reduced to prime-torsion elements: any
// offending ideal pair contains offending principal ideals generated in the
// p-torsion slice S[p], so scanning those suffices.
PrimeReport is_prime(const FiniteRing& R, const Caps& caps = {});
PrimeReport is_semiprime(const FiniteRing& R, const Caps& caps = {});

// The full ideal lattice: join-closure of the principal ideals of all ring
// elements.  Sorted deterministically (size, then rows).  Throws CapExceeded
// when the element count or the lattice exceeds the caps.
std::vector<Submodule> enumerate_ideals(const FiniteRing& R, const Caps& caps = {});

// All ring elements in index order (index digits are little-endian base m).
void for_each_element(const FiniteRing& R, uint64_t cap,
                      const std::function<bool(const Vec&)>& f);

std::vector<uint32_t> prime_divisors(uint32_t m);

}  // namespace gplab

#endif
