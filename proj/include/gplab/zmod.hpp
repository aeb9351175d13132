#ifndef GPLAB_ZMOD_HPP
#define GPLAB_ZMOD_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

// Exact linear algebra over Z/m.  All submodule computations in the library
// reduce to the Howell normal form, which is a canonical echelon form for
// row spans over Z/m: equal spans have identical forms, and membership is
// decided by successive pivot division.

namespace gplab::zmod {

using Vec = std::vector<uint32_t>;
using Mat = std::vector<Vec>;

uint32_t gcd_u(uint32_t a, uint32_t b);

// ax + by = g over the integers.
struct EGcd {
    int64_t g, x, y;
};
EGcd egcd(int64_t a, int64_t b);

// Inverse of a unit a modulo m.
uint32_t inv_unit(uint32_t a, uint32_t m);

// A unit u with u*a == gcd(a,m) (mod m).
uint32_t normalizing_unit(uint32_t a, uint32_t m);

bool is_zero_vec(const Vec& v);

Vec scaled(const Vec& v, uint32_t c, uint32_t m);
void add_scaled_inplace(Vec& v, const Vec& w, uint32_t c, uint32_t m);  // v += c*w

// Canonical Howell form of the row span of `rows`; zero rows dropped,
// pivots in strictly increasing column order, pivot entries divide m,
// entries above a pivot reduced below it.
Mat howell_form(Mat rows, uint32_t m, size_t ncols);

// Membership of v in the span of a Howell-form matrix.
bool member(const Mat& hf, Vec v, uint32_t m);

bool span_subset(const Mat& hf_sub, const Mat& hf_super, uint32_t m);

// One x with x*gens == rhs, if any (x indexed by rows of gens).
std::optional<Vec> solve_left(const Mat& gens, const Vec& rhs, uint32_t m);

// Howell basis of { x : x*gens == 0 }.
Mat kernel_left(const Mat& gens, uint32_t m);

// Howell basis of span(a) ∩ span(b); rows of a and b have ncols entries.
Mat intersect(const Mat& a, const Mat& b, uint32_t m, size_t ncols);

// Number of elements of the span (Howell form input): prod of m/pivot.
uint64_t span_size(const Mat& hf, uint32_t m);

// Enumerate all elements of the span of a Howell-form matrix in a fixed
// deterministic order (mixed-radix over rows, last row fastest).  Starts
// with the zero vector; stops early when f returns false.
void for_each_span_element(const Mat& hf, uint32_t m, size_t ncols,
                           const std::function<bool(const Vec&)>& f);

}  // namespace gplab::zmod

#endif
