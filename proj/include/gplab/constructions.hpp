#ifndef GPLAB_CONSTRUCTIONS_HPP
#define GPLAB_CONSTRUCTIONS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gplab/graded.hpp"
#include "gplab/groups.hpp"
#include "gplab/modring.hpp"
#include "gplab/primality.hpp"

namespace gplab {

// Builders that turn actions of groups on finite rings into graded rings:
// group rings, skew group rings, partial skew group rings, unital partial
// crossed products, and graded matrix rings.  Every builder validates its
// input data, re-verifies associativity of the produced structure constants
// on all basis triples, and asserts the grading class the construction is
// known to have.

// ---------------------------------------------------------------------------
// Global actions

// An action of G on R by ring automorphisms.  maps[g] is a rank x rank
// matrix over Z/m; row i is the image of basis vector i, and an element acts
// as v -> sum_i v_i * maps[g][i].
struct SkewAction {
    std::vector<Mat> maps;
};

SkewAction trivial_skew_action(const FiniteRing& R, const FiniteGroup& G);

// sum_i v_i * M[i]
Vec apply_map(const Mat& M, const Vec& v, uint32_t m);

// Shapes, multiplicativity on basis pairs, bijectivity, identity at e, and
// compatibility with the group law.  Errors: "not_automorphism" and
// "not_a_homomorphism", each naming the least failing witness.
void validate_skew_action(const FiniteRing& R, const FiniteGroup& G, const SkewAction& act);

// ---------------------------------------------------------------------------
// Partial actions

// Per degree g an ideal D_g of R (omitted degrees carry the zero ideal) and
// a map alpha_g : D_{g^-1} -> D_g given by the image of each Howell-basis
// row of D_{g^-1}.  Every nonzero D_g must have unit pivots so that
// coordinates over its rows are unique; this restricts the admissible
// ideals over non-prime moduli but keeps each component a free summand.
struct PartialActionData {
    std::map<Deg, Submodule> ideals;
    std::map<Deg, Mat> maps;
};

// alpha_e = id_R, each alpha_g an isomorphism onto D_g multiplicative on
// products, translation of products along the action, and coherence of
// composed maps on their common domains; each D_g must be an s-unital ideal.
// Errors: "malformed_data", "free_component_required", "not_s_unital",
// "axiom_violation" (the message names the axiom and the witness).
void validate_partial_action(const FiniteRing& R, const GradeGroup& G,
                             const PartialActionData& data);

// alpha_g(r); r must lie in D_{g^-1}.
Vec partial_apply(const FiniteRing& R, const GradeGroup& G, const PartialActionData& data,
                  const Deg& g, const Vec& r);

// The global data with every D_g = R and alpha the given action.
PartialActionData global_action_data(const FiniteRing& R, const FiniteGroup& G,
                                     const SkewAction& act);

// A twisted partial action: the components must be unital ideals, units[g]
// their identities, and twists[(g,h)] an invertible element of D_g D_{gh}.
// An omitted twist defaults to the identity of that product ideal.
struct TwistedPartialData {
    PartialActionData base;
    std::map<Deg, Vec> units;
    std::map<std::pair<Deg, Deg>, Vec> twists;
};

// Errors: those of the untwisted validation plus "unital_required",
// "not_invertible", and "axiom_violation" for the twisted composition and
// cocycle identities.
void validate_twisted_partial(const FiniteRing& R, const GradeGroup& G,
                              const TwistedPartialData& data);

// ---------------------------------------------------------------------------
// Ring builders

// R[G] with basis (R-basis) x G in group-element-major blocks.  The grading
// is strong exactly when R is idempotent and nearly epsilon-strong exactly
// when R is s-unital; both equivalences are asserted on every build.
GradedRing build_group_ring(const FiniteRing& R, const FiniteGroup& G,
                            const Caps& caps = {});

// Same layout, with (b delta_g)(b' delta_h) = b alpha_g(b') delta_{gh}.
GradedRing build_skew_group_ring(const FiniteRing& R, const FiniteGroup& G,
                                 const SkewAction& act, const Caps& caps = {});

// Components D_g delta_g over the (finite) support of the data, in degree
// order.  The canonical grading is asserted nearly epsilon-strong.  Lattice
// grade groups are admitted when only finitely many D_g are nonzero.
GradedRing build_partial_skew_group_ring(const FiniteRing& R, const GradeGroup& G,
                                         const PartialActionData& data,
                                         const Caps& caps = {});

// (u delta_g)(v delta_h) = u alpha_g(v 1_{g^-1}) w_{g,h} delta_{gh}; R must
// be unital and the result is unital with identity 1 delta_e.  The grading
// is asserted epsilon-strong.
GradedRing build_partial_crossed_product(const FiniteRing& R, const GradeGroup& G,
                                         const TwistedPartialData& data,
                                         const Caps& caps = {});

enum class MatrixGradeMode { Integer, IntegerModN };

// M_n(R) graded by deg(e_ij) = i - j over the integers, or by its reduction
// over Z/n.  For s-unital R the integer grading is asserted nearly
// epsilon-strong and the reduction is asserted strong.
GradedRing build_matrix_graded(const FiniteRing& R, uint32_t n, MatrixGradeMode mode,
                               const Caps& caps = {});

// ---------------------------------------------------------------------------
// The group-ring primeness criterion

struct ConnellReport {
    bool prime;
    bool ring_prime;
    bool group_obstruction;  // G has a nontrivial finite normal subgroup
    std::optional<PrimenessReport> cross_check;  // concrete finite G only
};

// R[G] is prime iff R is prime and G has no nontrivial finite normal
// subgroup.  The first overload takes the ring verdict as given; the second
// decides it by search (R must be s-unital) and, when G is a concrete
// finite group whose group ring fits in the caps, cross-checks the verdict
// against the graded decision procedure on the built ring.
ConnellReport connell_decision(bool ring_is_prime, const SymbolicGroup& G);
ConnellReport connell_decision(const FiniteRing& R, const SymbolicGroup& G,
                               const Caps& caps = {});

// ---------------------------------------------------------------------------
// Invariance and primeness through the partial-action data

// H-invariance of an ideal I of R: alpha_h(I D_{h^-1}) contained in I for
// every h in H.  The containment form over all of H is equivalent to the
// equality alpha_h(I D_{h^-1}) = I D_h over all of H; the equivalence is
// asserted on every call.
bool partial_invariance(const FiniteRing& R, const GradeGroup& G,
                        const PartialActionData& data, const Submodule& I,
                        const GradedSubgroup& H);

struct PartialPrimeReport {
    bool not_prime;
    PrimenessReport decision;
    std::optional<NPDatum> datum;
    // The datum re-derived through the action data alone: invariance and
    // outside-annihilation of the unembedded ideal of R, and the subring
    // conditions over the N-components.  False when no datum was produced.
    bool conditions_verified = false;
};

// Builds R star_alpha G, decides primeness, and re-verifies any witnessing
// datum directly against the partial-action data; a mismatch between the
// graded and the action-level routes throws TheoremViolation.
PartialPrimeReport partial_prime_conditions(const FiniteRing& R, const GradeGroup& G,
                                            const PartialActionData& data,
                                            const Caps& caps = {});

}  // namespace gplab

#endif
