#include "gplab/zmod.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace gplab::zmod {

uint32_t gcd_u(uint32_t a, uint32_t b) {
    while (b) {
        uint32_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

EGcd egcd(int64_t a, int64_t b) {
    if (b == 0) return {a, 1, 0};
    EGcd e = egcd(b, a % b);
    return {e.g, e.y, e.x - (a / b) * e.y};
}

uint32_t inv_unit(uint32_t a, uint32_t m) {
    EGcd e = egcd(static_cast<int64_t>(a % m), static_cast<int64_t>(m));
    if (e.g != 1) throw std::invalid_argument("inv_unit: not a unit");
    int64_t x = e.x % static_cast<int64_t>(m);
    if (x < 0) x += m;
    return static_cast<uint32_t>(x);
}

uint32_t normalizing_unit(uint32_t a, uint32_t m) {
    a %= m;
    if (a == 0) return 1;
    uint32_t g = gcd_u(a, m);
    uint32_t a1 = a / g, m1 = m / g;
    // a1 is a unit mod m1; lift its inverse to a unit mod m.
    uint32_t u0 = (m1 == 1) ? 0 : inv_unit(a1 % m1, m1);
    for (uint32_t t = 0;; ++t) {
        uint64_t cand = u0 + static_cast<uint64_t>(t) * m1;
        if (cand >= m && t > 0 && m1 == 0) break;
        uint32_t u = static_cast<uint32_t>(cand % m);
        if (u == 0) u = static_cast<uint32_t>((cand + m1) % m);
        if (gcd_u(u, m) == 1) {
            // u*a == g (mod m) by construction
            return u;
        }
        if (t > m) throw std::logic_error("normalizing_unit: search failed");
    }
    throw std::logic_error("normalizing_unit: unreachable");
}

bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

Vec scaled(const Vec& v, uint32_t c, uint32_t m) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        r[i] = static_cast<uint32_t>((static_cast<uint64_t>(v[i]) * c) % m);
    return r;
}

void add_scaled_inplace(Vec& v, const Vec& w, uint32_t c, uint32_t m) {
    for (size_t i = 0; i < v.size(); ++i)
        v[i] = static_cast<uint32_t>((v[i] + static_cast<uint64_t>(w[i]) * c) % m);
}

namespace {

size_t lead_col(const Vec& v, size_t ncols) {
    for (size_t j = 0; j < ncols; ++j)
        if (v[j] != 0) return j;
    return ncols;
}

// Core elimination.  Rows may be longer than ncols (transform columns ride
// along); pivoting only ever looks at the first ncols columns.  Returns the
// pivot rows sorted by lead column; rows whose first ncols entries vanished
// are appended to *zeroed when requested.
Mat eliminate(Mat input, uint32_t m, size_t ncols, Mat* zeroed) {
    std::vector<std::optional<Vec>> piv(ncols);
    std::deque<Vec> work;
    for (auto& r : input)
        if (!is_zero_vec(r)) work.push_back(std::move(r));

    auto enqueue_annihilator = [&](const Vec& p, size_t col) {
        uint32_t d = p[col];
        uint32_t t = m / d;  // pivot entries divide m
        if (t < m) {
            Vec ann = scaled(p, t, m);
            if (!is_zero_vec(ann)) work.push_back(std::move(ann));
        }
    };

    while (!work.empty()) {
        Vec r = std::move(work.front());
        work.pop_front();
        for (size_t col = 0; col < ncols; ++col) {
            if (r[col] == 0) continue;
            if (!piv[col]) {
                uint32_t u = normalizing_unit(r[col], m);
                Vec p = scaled(r, u, m);
                // lead entry is now gcd(old, m), a divisor of m
                enqueue_annihilator(p, col);
                piv[col] = std::move(p);
                r.clear();
                break;
            }
            Vec& p = *piv[col];
            uint32_t d = p[col], a = r[col];
            if (a % d == 0) {
                add_scaled_inplace(r, p, m - (a / d) % m, m);
                continue;
            }
            // combine pivot and row with a unimodular transform so the new
            // pivot entry is gcd(d, a)
            EGcd e = egcd(d, a);
            uint32_t g = static_cast<uint32_t>(e.g);
            uint32_t x = static_cast<uint32_t>(((e.x % m) + m) % m);
            uint32_t y = static_cast<uint32_t>(((e.y % m) + m) % m);
            Vec new_p = scaled(p, x, m);
            add_scaled_inplace(new_p, r, y, m);
            Vec new_r = scaled(r, d / g, m);
            add_scaled_inplace(new_r, p, m - (a / g) % m, m);
            assert(new_p[col] % m == g % m);
            assert(new_r[col] == 0);
            p = std::move(new_p);
            enqueue_annihilator(p, col);
            r = std::move(new_r);
        }
        if (!r.empty() && zeroed) {
            bool main_zero = true;
            for (size_t j = 0; j < ncols; ++j)
                if (r[j] != 0) { main_zero = false; break; }
            if (main_zero && !is_zero_vec(r)) zeroed->push_back(std::move(r));
        }
    }

    Mat rows;
    for (size_t c = 0; c < ncols; ++c)
        if (piv[c]) rows.push_back(std::move(*piv[c]));
    // reduce entries above each pivot
    for (size_t i = rows.size(); i-- > 0;) {
        size_t c = lead_col(rows[i], ncols);
        uint32_t d = rows[i][c];
        for (size_t k = 0; k < i; ++k) {
            uint32_t q = rows[k][c] / d;
            if (q) add_scaled_inplace(rows[k], rows[i], m - q % m, m);
        }
    }
    return rows;
}

}  // namespace

Mat howell_form(Mat rows, uint32_t m, size_t ncols) {
    for (auto& r : rows) {
        if (r.size() != ncols) throw std::invalid_argument("howell_form: ragged rows");
        for (auto& x : r) x %= m;
    }
    return eliminate(std::move(rows), m, ncols, nullptr);
}

bool member(const Mat& hf, Vec v, uint32_t m) {
    if (hf.empty()) return is_zero_vec(v);
    size_t ncols = hf[0].size();
    for (auto& x : v) x %= m;
    size_t i = 0;
    for (size_t col = 0; col < ncols; ++col) {
        if (v[col] == 0) continue;
        while (i < hf.size() && lead_col(hf[i], ncols) < col) ++i;
        if (i >= hf.size() || lead_col(hf[i], ncols) != col) return false;
        uint32_t d = hf[i][col];
        if (v[col] % d != 0) return false;
        add_scaled_inplace(v, hf[i], m - (v[col] / d) % m, m);
    }
    return is_zero_vec(v);
}

bool span_subset(const Mat& hf_sub, const Mat& hf_super, uint32_t m) {
    for (const auto& r : hf_sub)
        if (!member(hf_super, r, m)) return false;
    return true;
}

namespace {

// Augment rows of `gens` with identity tags, eliminate on the main columns,
// and return (pivot rows, zeroed rows); each carries its tag.
void tagged_eliminate(const Mat& gens, uint32_t m, size_t ncols, Mat& pivots, Mat& zeroed) {
    Mat aug;
    aug.reserve(gens.size());
    size_t n = gens.size();
    for (size_t i = 0; i < n; ++i) {
        Vec r = gens[i];
        for (auto& x : r) x %= m;
        r.resize(ncols + n, 0);
        r[ncols + i] = 1 % m;
        aug.push_back(std::move(r));
    }
    pivots = eliminate(std::move(aug), m, ncols, &zeroed);
}

}  // namespace

std::optional<Vec> solve_left(const Mat& gens, const Vec& rhs, uint32_t m) {
    size_t ncols = rhs.size();
    for (const auto& g : gens)
        if (g.size() != ncols) throw std::invalid_argument("solve_left: shape");
    Mat pivots, zeroed;
    tagged_eliminate(gens, m, ncols, pivots, zeroed);
    Vec v = rhs;
    for (auto& x : v) x %= m;
    v.resize(ncols + gens.size(), 0);
    size_t i = 0;
    for (size_t col = 0; col < ncols; ++col) {
        if (v[col] == 0) continue;
        while (i < pivots.size() && lead_col(pivots[i], ncols) < col) ++i;
        if (i >= pivots.size() || lead_col(pivots[i], ncols) != col) return std::nullopt;
        uint32_t d = pivots[i][col];
        if (v[col] % d != 0) return std::nullopt;
        add_scaled_inplace(v, pivots[i], m - (v[col] / d) % m, m);
    }
    for (size_t j = 0; j < ncols; ++j)
        if (v[j] != 0) return std::nullopt;
    // rhs - x*gens == 0 with tag -x recorded in the tail
    Vec x(gens.size());
    for (size_t j = 0; j < gens.size(); ++j) x[j] = (m - v[ncols + j] % m) % m;
    return x;
}

Mat kernel_left(const Mat& gens, uint32_t m) {
    if (gens.empty()) return {};
    size_t ncols = gens[0].size();
    Mat pivots, zeroed;
    tagged_eliminate(gens, m, ncols, pivots, zeroed);
    Mat tags;
    for (const auto& z : zeroed)
        tags.emplace_back(z.begin() + ncols, z.end());
    return howell_form(std::move(tags), m, gens.size());
}

Mat intersect(const Mat& a, const Mat& b, uint32_t m, size_t ncols) {
    // span{(u,u) : u in a} + span{(v,0) : v in b}; rows with zero first half
    // carry an element of span(a) ∩ span(b) in the second half.
    Mat aug;
    for (const auto& u : a) {
        Vec r(2 * ncols);
        for (size_t j = 0; j < ncols; ++j) r[j] = r[ncols + j] = u[j] % m;
        aug.push_back(std::move(r));
    }
    for (const auto& v : b) {
        Vec r(2 * ncols, 0);
        for (size_t j = 0; j < ncols; ++j) r[j] = v[j] % m;
        aug.push_back(std::move(r));
    }
    Mat zeroed;
    Mat pivots = eliminate(std::move(aug), m, ncols, &zeroed);
    (void)pivots;
    Mat tails;
    for (const auto& z : zeroed)
        tails.emplace_back(z.begin() + ncols, z.end());
    return howell_form(std::move(tails), m, ncols);
}

uint64_t span_size(const Mat& hf, uint32_t m) {
    uint64_t n = 1;
    if (hf.empty()) return 1;
    size_t ncols = hf[0].size();
    for (const auto& r : hf) {
        size_t c = lead_col(r, ncols);
        n *= m / r[c];
    }
    return n;
}

void for_each_span_element(const Mat& hf, uint32_t m, size_t ncols,
                           const std::function<bool(const Vec&)>& f) {
    std::vector<uint32_t> radix;
    for (const auto& r : hf) radix.push_back(m / r[lead_col(r, ncols)]);
    std::vector<uint32_t> digits(hf.size(), 0);
    Vec v(ncols, 0);
    for (;;) {
        if (!f(v)) return;
        size_t i = hf.size();
        while (i > 0) {
            --i;
            digits[i] += 1;
            add_scaled_inplace(v, hf[i], 1, m);
            if (digits[i] < radix[i]) break;
            // roll over: subtract radix*row (== adding (m - radix mod m)*row)
            add_scaled_inplace(v, hf[i], m - (radix[i] % m), m);
            digits[i] = 0;
            if (i == 0) return;
        }
        if (hf.empty()) return;
    }
}

}  // namespace gplab::zmod
