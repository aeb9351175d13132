#ifndef GPLAB_GRADED_HPP
#define GPLAB_GRADED_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gplab/groups.hpp"
#include "gplab/modring.hpp"

namespace gplab {

// A degree: for a finite grade group a single element index, for an integer
// lattice a tuple of coordinates.  Uniformly a vector of integers so degree
// maps can be keyed and ordered lexicographically.
using Deg = std::vector<int64_t>;

// The group the grading lives over: a concrete finite group or Z^rank.
struct GradeGroup {
    std::variant<FiniteGroup, uint32_t> data;  // uint32_t = lattice rank

    bool finite() const { return std::holds_alternative<FiniteGroup>(data); }
    const FiniteGroup& group() const { return std::get<FiniteGroup>(data); }
    uint32_t lattice_rank() const { return std::get<uint32_t>(data); }

    Deg identity() const;
    Deg mul(const Deg& a, const Deg& b) const;
    Deg inv(const Deg& a) const;
    void validate(const Deg& a) const;
    std::string to_string(const Deg& a) const;
    bool same_as(const GradeGroup& o) const;
};

GradeGroup finite_grade_group(FiniteGroup g);
GradeGroup lattice_grade_group(uint32_t rank);

// A group-graded ring: every basis vector carries a degree, and the product
// of two basis vectors must land in the component of the product degree.
struct GradedRing {
    FiniteRing ring;
    GradeGroup group;
    std::vector<Deg> degrees;                    // per basis index
    std::map<Deg, std::vector<uint32_t>> blocks; // degree -> basis indices

    std::vector<Deg> support() const;
    bool in_support(const Deg& x) const { return blocks.count(x) > 0; }
    const std::vector<uint32_t>* block(const Deg& x) const;
    Submodule component(const Deg& x) const;
    Deg e() const { return group.identity(); }
};

// Validates degree compatibility of all structure constants; the error
// message names the offending basis triple.
GradedRing make_graded_ring(FiniteRing ring, GradeGroup group, std::vector<Deg> degrees);

// span(S_x * S_y) as a submodule of the full ring.
Submodule component_product(const GradedRing& S, const Deg& x, const Deg& y);

// ---------------------------------------------------------------------------
// Classification

struct EpsilonWitness {
    Deg x;
    Vec eps;        // in S_x S_{x^-1}: left identity on S_x, right identity on S_{x^-1}
    Vec eps_prime;  // in S_{x^-1} S_x: right identity on S_x, left identity on S_{x^-1}
};

struct GradingFlags {
    bool strong = false;
    bool epsilon_strong = false;
    bool nearly_epsilon_strong = false;
    bool symmetric = false;
    bool non_degenerate = false;
    bool ring_s_unital = false;
    bool principal_s_unital = false;  // the identity component as a subring
    std::vector<EpsilonWitness> epsilon_witnesses;  // per support degree when epsilon_strong
};

// Computes all flags.  The nearly-epsilon-strong flag is evaluated by two
// independent routes (per-element local units, and symmetry plus s-unital
// corner subrings S_x S_{x^-1}); their agreement and the known implication
// chain between flags are asserted, so a mismatch throws TheoremViolation.
GradingFlags classify_grading(const GradedRing& S, const Caps& caps = {});

// For an epsilon-strong grading: true iff right annihilators of all
// components vanish, which is equivalent to the grading being strong; the
// equivalence with the strong flag is asserted.  Throws InputError when the
// grading is not epsilon-strong.
bool is_cancellative_epsilon_strong(const GradedRing& S, const Caps& caps = {});

// ---------------------------------------------------------------------------
// Subgroups of the grade group

// For finite grade groups an explicit subgroup; for lattices either the
// whole group or the sublattice spanned by generator tuples.
struct GradedSubgroup {
    std::optional<Subgroup> fin;
    bool whole_lattice = false;
    std::vector<Deg> lattice_gens;
};

GradedSubgroup whole_grade_group(const GradedRing& S);
GradedSubgroup from_finite_subgroup(Subgroup H);
GradedSubgroup from_lattice_gens(std::vector<Deg> gens);

bool grade_subgroup_contains(const GradeGroup& G, const GradedSubgroup& H, const Deg& x);
bool grade_subgroup_contains(const GradedRing& S, const GradedSubgroup& H, const Deg& x);

// Degrees x with both S_x and S_{x^-1} nonzero and x in H: conjugation by
// any other degree is automatically zero, so these are the only conjugators
// an invariance check needs to look at.
std::vector<Deg> conjugator_degrees(const GradedRing& S, const GradedSubgroup& H);

// ---------------------------------------------------------------------------
// Ideals of the identity component and the invariant-ideal calculus

std::vector<uint32_t> principal_block(const GradedRing& S);  // basis of S_e

// The ideal of the subring spanned by `block` generated by gens.
Submodule ideal_in_block(const FiniteRing& R, const std::vector<uint32_t>& block,
                         const Mat& gens);

// I^x = S_{x^-1} I S_x.
Submodule conjugate_ideal(const GradedRing& S, const Submodule& I, const Deg& x);

// I^h ⊆ I for all h in H.
bool is_invariant(const GradedRing& S, const Submodule& I, const GradedSubgroup& H);

// S_{h^-1 N} I S_{h N} ⊆ I for all h in H; N must be normalized by H.
bool is_coset_invariant(const GradedRing& S, const Submodule& I, const GradedSubgroup& H,
                        const GradedSubgroup& N);

// S_x S_{x^-1} I = I S_x S_{x^-1} for every support degree x.
bool is_epsilon_invariant(const GradedRing& S, const Submodule& I);

// Smallest H-invariant ideal of S_e containing I (outer fixpoint of
// conjugating and re-closing to an ideal).
Submodule invariant_closure(const GradedRing& S, const Submodule& I,
                            const GradedSubgroup& H);

// Smallest H/N-coset-invariant ideal of S_e... for ideals of a block ring;
// used by the datum search with blocks other than S_e as well.
Submodule invariant_closure_in_block(const GradedRing& S,
                                     const std::vector<uint32_t>& block,
                                     const Submodule& I, const GradedSubgroup& H);
Submodule coset_invariant_closure_in_block(const GradedRing& S,
                                           const std::vector<uint32_t>& block,
                                           const Submodule& I, const GradedSubgroup& H,
                                           const GradedSubgroup& N);

struct GPrimeReport {
    bool holds;
    std::optional<Vec> witness_a, witness_b;  // closures multiply to zero
    uint64_t scanned = 0;
};

// G-primeness of S_e: no two nonzero G-invariant ideals of S_e multiply to
// zero.  Reduced to prime-torsion generators exactly as in is_prime, with
// principal ideals replaced by their invariant closures.
GPrimeReport is_G_prime(const GradedRing& S, const Caps& caps = {});
GPrimeReport is_G_semiprime(const GradedRing& S, const Caps& caps = {});

// Graded primeness of S: no two nonzero graded ideals multiply to zero.
// Scans pairs of homogeneous prime-torsion generators.
GPrimeReport is_graded_prime(const GradedRing& S, const Caps& caps = {});

// ---------------------------------------------------------------------------
// Induced structures

struct SubringGraded {
    GradedRing sub;
    std::vector<uint32_t> to_parent;  // sub basis index -> parent basis index
};

// S_H = ⊕_{x∈H} S_x as an H-graded ring.  For finite grade groups H becomes
// its own grade group (reindexed); for lattices the ambient lattice is kept.
SubringGraded subring_graded(const GradedRing& S, const GradedSubgroup& H);

// Truncation to degrees in H (coordinate projection).
Vec pi_truncate(const GradedRing& S, const GradedSubgroup& H, const Vec& v);
Submodule pi_truncate_submodule(const GradedRing& S, const GradedSubgroup& H,
                                const Submodule& M);

// The G/N-grading on the same ring.  For finite grade groups N is any
// normal subgroup; for lattices N must be a full-rank sublattice (finite
// quotient) or zero (identity).
GradedRing induced_quotient_grading(const GradedRing& S, const GradedSubgroup& N);

// ---------------------------------------------------------------------------
// Graded ideals and the correspondence with invariant ideals of S_e

std::vector<Submodule> enumerate_graded_ideals(const GradedRing& S, const Caps& caps = {});

// Ideal lattice of the subring spanned by a block (join closure of its
// principal ideals).
std::vector<Submodule> enumerate_block_ideals(const FiniteRing& R,
                                              const std::vector<uint32_t>& block,
                                              const Caps& caps = {});

struct CorrespondenceReport {
    uint64_t graded_ideals = 0;
    uint64_t invariant_ideals = 0;
    uint64_t graded_prime_ideals = 0;
    uint64_t g_prime_ideals = 0;
};

// Verifies that I -> I ∩ S_e and J -> S J S are mutually inverse bijections
// between graded ideals of S and G-invariant ideals of S_e, and that they
// match graded-prime ideals with G-prime ideals.  Requires a nearly
// epsilon-strong grading; any failed check throws CorrespondenceViolation
// (an implementation bug, not an input property).
CorrespondenceReport graded_ideal_correspondence(const GradedRing& S,
                                                 const Caps& caps = {});

}  // namespace gplab

#endif
