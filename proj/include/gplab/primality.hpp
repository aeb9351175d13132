#ifndef GPLAB_PRIMALITY_HPP
#define GPLAB_PRIMALITY_HPP

#include <gplab/graded.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gplab {

// Witness data for non-primeness of a ring graded by a finite group:
// subgroups N normal in H, a nonzero H-invariant ideal I of S_e killed by
// conjugation from outside H, and two nonzero ideals of S_N inside I*S_N
// whose product vanishes.
struct NPDatum {
    Subgroup H, N;
    Submodule I;                 // ideal of S_e, coordinates in the full ring
    Submodule A_tilde, B_tilde;  // ideals of S_N, coordinates in the full ring
    Vec gen_a, gen_b;            // elements A_tilde and B_tilde grew from
    char flavor = 'b';           // variant the search was asked for
    bool holds_b = false, holds_c = false, holds_d = false, holds_e = false;
};

// Datum variants, ordered weakest to strongest:
//   'b'  A * S_H * B = 0
//   'c'  'b' with N finite (no extra content over a finite grade group)
//   'd'  'c' plus H-invariance of A and B
//   'e'  H/N-coset-invariance of A and B, and only A * B = 0
bool valid_np_flavor(char flavor);

struct DatumCheck {
    bool ok;
    std::string failed;  // first failing condition, empty when ok
};

// Checks the datum conditions for one flavor in a fixed order and reports
// the first failure.  Structural problems (wrong modulus or width, H or N
// not subgroups of the grade group, N not inside H) are input errors, not
// failed conditions.  Only finite grade groups carry data.
DatumCheck verify_np_datum(const GradedRing& S, const NPDatum& d, char flavor,
                           const Caps& caps = {});

// Exhaustive search in enumeration order: H over subgroups, N over normal
// subgroups of H, I over the ideal lattice of S_e, then generator pairs
// (a, b) over the elements of I*S_N.  A and B are the flavor-closed
// principal ideals of S_N generated by a and b; a pair is kept only when
// it stays inside I*S_N and passes the flavor conditions.  Returns the
// first datum found or nothing.  The (H, N) cells run on a worker pool
// sized by GRADED_PRIME_LAB_THREADS; the winner is the enumeration-order
// first regardless of scheduling.
std::optional<NPDatum> search_np_datum(const GradedRing& S, char flavor,
                                       const Caps& caps = {});

enum class PrimeStrategy { Auto, Ordered, NPSearch, BruteForce };

struct PrimenessReport {
    bool prime;
    std::string method;     // "ordered_shortcut" | "np_search" | "brute_force"
    std::string criterion;  // what justified the verdict
    std::optional<Vec> witness_a, witness_b;  // zero-product ideal generators
    std::optional<NPDatum> datum;             // np_search certificate
    uint64_t scanned = 0;                     // exhaustion bound of the scan
    std::optional<bool> cross_check;          // brute-force agreement when run
    int64_t elapsed_ms = 0;
};

// Primeness of the underlying ring by the exhaustive ideal-pair scan.
PrimenessReport is_prime_graded(const GradedRing& S, const Caps& caps = {});

// Strategy dispatch.  Auto picks the cheapest route the grading justifies:
// a torsion-free grade group with a nearly epsilon-strong grading reduces
// to G-primeness of S_e, a finite grade group with a nearly epsilon-strong
// grading to absence of a datum, anything else to the brute-force scan.
// Requesting Ordered or NPSearch on a grading outside its hypotheses
// throws an input error with code "strategy_unavailable".  Small rings get
// a brute-force cross-check; disagreement throws.
PrimenessReport decide_prime(const GradedRing& S,
                             PrimeStrategy strategy = PrimeStrategy::Auto,
                             const Caps& caps = {});

struct HarnessReport {
    bool not_prime;  // verdict of the brute-force scan
    bool exists_b, exists_c, exists_d, exists_e;
    bool non_degenerate, nearly_epsilon_strong;
    std::vector<std::string> observations;  // open gaps, never errors
};

// Runs all four datum searches next to the brute-force verdict and asserts
// exactly the implications the grading supports: every found datum must
// verify; each flavor implies the next weaker one and, when the grading is
// non-degenerate, non-primeness; all five statements agree when it is
// nearly epsilon-strong.  A violation throws; anything outside the proved
// implications is recorded as an observation.
HarnessReport main_theorem_harness(const GradedRing& S, const Caps& caps = {});

}  // namespace gplab

#endif
