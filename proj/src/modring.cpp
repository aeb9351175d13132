#include "gplab/modring.hpp"

#include <algorithm>
#include <map>

namespace gplab {

Vec FiniteRing::mul(const Vec& a, const Vec& b) const {
    Vec r(rank, 0);
    for (uint32_t i = 0; i < rank; ++i) {
        if (a[i] == 0) continue;
        for (uint32_t j = 0; j < rank; ++j) {
            if (b[j] == 0) continue;
            uint32_t c = static_cast<uint32_t>((static_cast<uint64_t>(a[i]) * b[j]) % modulus);
            if (c == 0) continue;
            const Vec& prod = basis_product(i, j);
            for (uint32_t t : support[i * rank + j])
                r[t] = static_cast<uint32_t>((r[t] + static_cast<uint64_t>(c) * prod[t]) % modulus);
        }
    }
    return r;
}

Vec FiniteRing::mul_basis_left(uint32_t i, const Vec& b) const {
    Vec r(rank, 0);
    for (uint32_t j = 0; j < rank; ++j) {
        if (b[j] == 0) continue;
        const Vec& prod = basis_product(i, j);
        for (uint32_t t : support[i * rank + j])
            r[t] = static_cast<uint32_t>((r[t] + static_cast<uint64_t>(b[j]) * prod[t]) % modulus);
    }
    return r;
}

Vec FiniteRing::mul_basis_right(const Vec& a, uint32_t j) const {
    Vec r(rank, 0);
    for (uint32_t i = 0; i < rank; ++i) {
        if (a[i] == 0) continue;
        const Vec& prod = basis_product(i, j);
        for (uint32_t t : support[i * rank + j])
            r[t] = static_cast<uint32_t>((r[t] + static_cast<uint64_t>(a[i]) * prod[t]) % modulus);
    }
    return r;
}

uint64_t FiniteRing::element_count() const {
    uint64_t n = 1;
    for (uint32_t i = 0; i < rank; ++i) {
        if (n > UINT64_MAX / modulus) return UINT64_MAX;
        n *= modulus;
    }
    return n;
}

namespace {

using SparseVec = std::vector<std::pair<uint32_t, uint32_t>>;  // (index, coeff), sorted

// accumulate c * row into acc (sparse merge deferred to normalize)
void acc_scaled_row(SparseVec& acc, uint32_t c, const Vec& row,
                    const std::vector<uint32_t>& supp, uint32_t m) {
    for (uint32_t t : supp) {
        uint32_t v = static_cast<uint32_t>((static_cast<uint64_t>(c) * row[t]) % m);
        if (v) acc.emplace_back(t, v);
    }
}

void normalize_sparse(SparseVec& acc, uint32_t m) {
    std::sort(acc.begin(), acc.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    for (size_t i = 0; i < acc.size();) {
        uint32_t idx = acc[i].first;
        uint64_t sum = 0;
        while (i < acc.size() && acc[i].first == idx) sum += acc[i++].second;
        uint32_t v = static_cast<uint32_t>(sum % m);
        if (v) out.emplace_back(idx, v);
    }
    acc = std::move(out);
}

}  // namespace

FiniteRing make_ring(uint32_t modulus, uint32_t rank, std::vector<Vec> table,
                     std::vector<std::string> labels, std::optional<Vec> unit) {
    if (modulus < 2) throw InputError("bad_modulus", "modulus must be at least 2");
    if (rank < 1) throw InputError("bad_rank", "rank must be at least 1");
    if (table.size() != static_cast<size_t>(rank) * rank)
        throw InputError("bad_table", "structure constant table has wrong size");
    FiniteRing R;
    R.modulus = modulus;
    R.rank = rank;
    for (auto& row : table) {
        if (row.size() != rank)
            throw InputError("bad_table", "structure constant row has wrong length");
        for (auto& x : row) x %= modulus;
    }
    R.table = std::move(table);
    R.support.resize(static_cast<size_t>(rank) * rank);
    for (size_t e = 0; e < R.table.size(); ++e)
        for (uint32_t t = 0; t < rank; ++t)
            if (R.table[e][t]) R.support[e].push_back(t);

    // associativity on all basis triples, accumulated sparsely
    for (uint32_t i = 0; i < rank; ++i)
        for (uint32_t j = 0; j < rank; ++j) {
            size_t ij = static_cast<size_t>(i) * rank + j;
            for (uint32_t l = 0; l < rank; ++l) {
                SparseVec lhs, rhs;
                for (uint32_t t : R.support[ij]) {
                    size_t tl = static_cast<size_t>(t) * rank + l;
                    acc_scaled_row(lhs, R.table[ij][t], R.table[tl], R.support[tl], modulus);
                }
                size_t jl = static_cast<size_t>(j) * rank + l;
                for (uint32_t t : R.support[jl]) {
                    size_t it = static_cast<size_t>(i) * rank + t;
                    acc_scaled_row(rhs, R.table[jl][t], R.table[it], R.support[it], modulus);
                }
                normalize_sparse(lhs, modulus);
                normalize_sparse(rhs, modulus);
                if (lhs != rhs)
                    throw InputError("not_associative",
                                     "structure constants fail associativity at basis triple (" +
                                         std::to_string(i) + "," + std::to_string(j) + "," +
                                         std::to_string(l) + ")");
            }
        }

    if (labels.empty()) {
        for (uint32_t i = 0; i < rank; ++i) labels.push_back("b" + std::to_string(i));
    } else if (labels.size() != rank) {
        throw InputError("label_count", "label count differs from ring rank");
    }
    R.labels = std::move(labels);

    if (unit) {
        Vec u = *unit;
        if (u.size() != rank) throw InputError("bad_unit", "unit vector has wrong length");
        for (auto& x : u) x %= modulus;
        for (uint32_t i = 0; i < rank; ++i) {
            Vec bi = R.basis(i);
            if (R.mul(u, bi) != bi || R.mul(bi, u) != bi)
                throw InputError("bad_unit", "declared unit is not a two-sided identity");
        }
        R.unit = std::move(u);
    }
    return R;
}

FiniteRing zmod_ring(uint32_t m) {
    std::vector<Vec> t{Vec{1 % m}};
    return make_ring(m, 1, std::move(t), {"1"}, Vec{1 % m});
}

FiniteRing matrix_ring(const FiniteRing& base, uint32_t n) {
    if (n < 1) throw InputError("bad_rank", "matrix size must be positive");
    uint32_t k = base.rank;
    uint32_t rank = n * n * k;
    auto idx = [&](uint32_t i, uint32_t j, uint32_t l) { return (i * n + j) * k + l; };
    std::vector<Vec> table(static_cast<size_t>(rank) * rank, Vec(rank, 0));
    std::vector<std::string> labels(rank);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j)
            for (uint32_t l = 0; l < k; ++l)
                labels[idx(i, j, l)] = "e" + std::to_string(i + 1) + std::to_string(j + 1) +
                                       (k > 1 ? "*" + base.labels[l] : "");
    // (e_ij ⊗ b_l)(e_pq ⊗ b_t) = δ_jp e_iq ⊗ b_l b_t
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j)
            for (uint32_t l = 0; l < k; ++l)
                for (uint32_t q = 0; q < n; ++q)
                    for (uint32_t t = 0; t < k; ++t) {
                        const Vec& p = base.basis_product(l, t);
                        Vec& row = table[static_cast<size_t>(idx(i, j, l)) * rank + idx(j, q, t)];
                        for (uint32_t s = 0; s < k; ++s) row[idx(i, q, s)] = p[s];
                    }
    std::optional<Vec> unit;
    if (base.unit) {
        Vec u(rank, 0);
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t l = 0; l < k; ++l) u[idx(i, i, l)] = (*base.unit)[l];
        unit = std::move(u);
    }
    return make_ring(base.modulus, rank, std::move(table), std::move(labels), std::move(unit));
}

FiniteRing direct_sum_ring(const std::vector<FiniteRing>& parts) {
    if (parts.empty()) throw InputError("bad_rank", "direct sum needs at least one part");
    uint32_t m = parts[0].modulus;
    uint32_t rank = 0;
    for (const auto& p : parts) {
        if (p.modulus != m)
            throw InputError("modulus_mismatch", "direct sum parts must share the modulus");
        rank += p.rank;
    }
    std::vector<Vec> table(static_cast<size_t>(rank) * rank, Vec(rank, 0));
    std::vector<std::string> labels(rank);
    bool all_unital = true;
    Vec unit(rank, 0);
    uint32_t off = 0;
    for (size_t pi = 0; pi < parts.size(); ++pi) {
        const FiniteRing& p = parts[pi];
        for (uint32_t i = 0; i < p.rank; ++i) {
            labels[off + i] = "s" + std::to_string(pi) + "." + p.labels[i];
            for (uint32_t j = 0; j < p.rank; ++j) {
                const Vec& prod = p.basis_product(i, j);
                Vec& row = table[static_cast<size_t>(off + i) * rank + (off + j)];
                for (uint32_t t = 0; t < p.rank; ++t) row[off + t] = prod[t];
            }
        }
        if (p.unit)
            for (uint32_t i = 0; i < p.rank; ++i) unit[off + i] = (*p.unit)[i];
        else
            all_unital = false;
        off += p.rank;
    }
    return make_ring(m, rank, std::move(table), std::move(labels),
                     all_unital ? std::optional<Vec>(unit) : std::nullopt);
}

// --- submodules ------------------------------------------------------------

bool Submodule::operator<(const Submodule& o) const {
    uint64_t s1 = size(), s2 = o.size();
    if (s1 != s2) return s1 < s2;
    return rows < o.rows;
}

Submodule span_submodule(uint32_t m, uint32_t ncols, Mat gens) {
    Submodule s;
    s.modulus = m;
    s.ncols = ncols;
    s.rows = zmod::howell_form(std::move(gens), m, ncols);
    return s;
}

Submodule zero_submodule(uint32_t m, uint32_t ncols) {
    return span_submodule(m, ncols, {});
}

Submodule full_submodule(uint32_t m, uint32_t ncols) {
    Mat gens;
    for (uint32_t i = 0; i < ncols; ++i) {
        Vec v(ncols, 0);
        v[i] = 1 % m;
        gens.push_back(std::move(v));
    }
    return span_submodule(m, ncols, std::move(gens));
}

Submodule submodule_sum(const Submodule& a, const Submodule& b) {
    Mat gens = a.rows;
    gens.insert(gens.end(), b.rows.begin(), b.rows.end());
    return span_submodule(a.modulus, a.ncols, std::move(gens));
}

Submodule submodule_intersect(const Submodule& a, const Submodule& b) {
    Submodule s;
    s.modulus = a.modulus;
    s.ncols = a.ncols;
    s.rows = zmod::intersect(a.rows, b.rows, a.modulus, a.ncols);
    return s;
}

void for_each_submodule_element(const Submodule& s,
                                const std::function<bool(const Vec&)>& f) {
    zmod::for_each_span_element(s.rows, s.modulus, s.ncols, f);
}

Submodule ideal_from_gens(const FiniteRing& R, const Mat& gens) {
    Mat out;
    out.reserve(gens.size() * (R.rank + 1) * (R.rank + 1));
    for (const auto& g : gens) {
        out.push_back(g);
        std::vector<Vec> left(R.rank);
        for (uint32_t i = 0; i < R.rank; ++i) {
            left[i] = R.mul_basis_left(i, g);
            out.push_back(R.mul_basis_right(g, i));
            out.push_back(left[i]);
        }
        for (uint32_t i = 0; i < R.rank; ++i) {
            if (zmod::is_zero_vec(left[i])) continue;
            for (uint32_t j = 0; j < R.rank; ++j)
                out.push_back(R.mul_basis_right(left[i], j));
        }
    }
    return span_submodule(R.modulus, R.rank, std::move(out));
}

Submodule principal_ideal(const FiniteRing& R, const Vec& a) {
    return ideal_from_gens(R, {a});
}

Submodule submodule_product(const FiniteRing& R, const Submodule& A, const Submodule& B) {
    Mat out;
    out.reserve(A.rows.size() * B.rows.size());
    for (const auto& u : A.rows)
        for (const auto& v : B.rows) out.push_back(R.mul(u, v));
    return span_submodule(R.modulus, R.rank, std::move(out));
}

Submodule annihilator_right(const FiniteRing& R, const Submodule& U) {
    // x is annihilated iff every generator row kills it; build the matrix of
    // t -> (u * b_t)_u and take the left kernel
    size_t nr = U.rows.size();
    if (nr == 0) return full_submodule(R.modulus, R.rank);
    Mat M(R.rank, Vec(nr * R.rank, 0));
    for (size_t ui = 0; ui < nr; ++ui)
        for (uint32_t t = 0; t < R.rank; ++t) {
            Vec p = R.mul_basis_right(U.rows[ui], t);
            for (uint32_t s = 0; s < R.rank; ++s) M[t][ui * R.rank + s] = p[s];
        }
    Submodule res;
    res.modulus = R.modulus;
    res.ncols = R.rank;
    res.rows = zmod::kernel_left(M, R.modulus);
    return res;
}

Submodule annihilator_left(const FiniteRing& R, const Submodule& U) {
    size_t nr = U.rows.size();
    if (nr == 0) return full_submodule(R.modulus, R.rank);
    Mat M(R.rank, Vec(nr * R.rank, 0));
    for (size_t ui = 0; ui < nr; ++ui)
        for (uint32_t t = 0; t < R.rank; ++t) {
            Vec p = R.mul_basis_left(t, U.rows[ui]);
            for (uint32_t s = 0; s < R.rank; ++s) M[t][ui * R.rank + s] = p[s];
        }
    Submodule res;
    res.modulus = R.modulus;
    res.ncols = R.rank;
    res.rows = zmod::kernel_left(M, R.modulus);
    return res;
}

std::optional<Vec> local_identity(const FiniteRing& R, const Submodule& T) {
    if (T.is_zero()) return R.zero();  // the zero ring's identity is 0
    // u = sum x_r t_r with u*t = t*u = t for every generator t
    size_t nr = T.rows.size();
    size_t cols = 2 * nr * R.rank;
    Mat M(nr, Vec(cols, 0));
    Vec rhs(cols, 0);
    for (size_t a = 0; a < nr; ++a)
        for (size_t b = 0; b < nr; ++b) {
            Vec lp = R.mul(T.rows[a], T.rows[b]);
            Vec rp = R.mul(T.rows[b], T.rows[a]);
            for (uint32_t s = 0; s < R.rank; ++s) {
                M[a][b * R.rank + s] = lp[s];
                M[a][(nr + b) * R.rank + s] = rp[s];
            }
        }
    for (size_t b = 0; b < nr; ++b)
        for (uint32_t s = 0; s < R.rank; ++s) {
            rhs[b * R.rank + s] = T.rows[b][s];
            rhs[(nr + b) * R.rank + s] = T.rows[b][s];
        }
    auto x = zmod::solve_left(M, rhs, R.modulus);
    if (!x) return std::nullopt;
    Vec u(R.rank, 0);
    for (size_t a = 0; a < nr; ++a)
        zmod::add_scaled_inplace(u, T.rows[a], (*x)[a], R.modulus);
    return u;
}

SUnitalReport is_s_unital(const FiniteRing& R, const Caps& caps) {
    // finite s-unital rings have a global identity (take a common local unit
    // for the whole underlying set), so existence of an identity decides it
    auto u = local_identity(R, full_submodule(R.modulus, R.rank));
    if (u) return {true, u, std::nullopt};
    // no identity: some element must fail r ∈ rS ∩ Sr; find the first
    SUnitalReport rep{false, std::nullopt, std::nullopt};
    for_each_element(R, caps.max_elements, [&](const Vec& r) {
        if (zmod::is_zero_vec(r)) return true;
        Mat rs, sr;
        for (uint32_t i = 0; i < R.rank; ++i) {
            rs.push_back(R.mul_basis_right(r, i));
            sr.push_back(R.mul_basis_left(i, r));
        }
        Submodule rS = span_submodule(R.modulus, R.rank, std::move(rs));
        Submodule Sr = span_submodule(R.modulus, R.rank, std::move(sr));
        if (!rS.contains(r) || !Sr.contains(r)) {
            rep.violator = r;
            return false;
        }
        return true;
    });
    if (!rep.violator)
        throw TheoremViolation("s_unital_witness",
                               "ring has no identity yet every element is locally united");
    return rep;
}

void for_each_element(const FiniteRing& R, uint64_t cap,
                      const std::function<bool(const Vec&)>& f) {
    if (R.element_count() > cap)
        throw CapExceeded("element_enumeration",
                          "ring has more than " + std::to_string(cap) + " elements");
    Vec v(R.rank, 0);
    for (;;) {
        if (!f(v)) return;
        uint32_t i = 0;
        while (i < R.rank) {
            if (++v[i] < R.modulus) break;
            v[i] = 0;
            ++i;
        }
        if (i == R.rank) return;
    }
}

std::vector<uint32_t> prime_divisors(uint32_t m) {
    std::vector<uint32_t> ps;
    for (uint32_t p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            ps.push_back(p);
            while (m % p == 0) m /= p;
        }
    if (m > 1) ps.push_back(m);
    return ps;
}

namespace {

// Scan the p-torsion slices S[p] = (m/p)*(Z/m)^rank.  Any ideal pair with
// zero product contains principal ideals generated there, so these scans are
// exhaustive for prime/semiprime failure.
void for_each_socle_element(const FiniteRing& R, uint64_t cap,
                            const std::function<bool(const Vec&)>& f) {
    for (uint32_t p : prime_divisors(R.modulus)) {
        uint64_t count = 1;
        for (uint32_t i = 0; i < R.rank; ++i) {
            count *= p;
            if (count > cap)
                throw CapExceeded("socle_enumeration",
                                  "torsion slice larger than " + std::to_string(cap));
        }
        uint32_t step = R.modulus / p;
        Vec w(R.rank, 0);
        bool done = false;
        for (uint64_t n = 1; n < count && !done; ++n) {
            uint32_t i = 0;
            while (true) {
                if (++w[i] < p) break;
                w[i] = 0;
                ++i;
            }
            Vec v(R.rank);
            for (uint32_t t = 0; t < R.rank; ++t) v[t] = w[t] * step;
            if (!f(v)) done = true;
        }
        if (done) return;
    }
}

Vec deterministic_nonzero(const Submodule& s) {
    // the last Howell row has the rightmost pivot; stable across runs
    return s.rows.back();
}

}  // namespace

PrimeReport is_prime(const FiniteRing& R, const Caps& caps) {
    PrimeReport rep{true, std::nullopt, std::nullopt, 0};
    for_each_socle_element(R, caps.max_elements, [&](const Vec& a) {
        ++rep.scanned;
        Submodule I = principal_ideal(R, a);
        Submodule ann = annihilator_right(R, I);
        if (!ann.is_zero()) {
            rep.holds = false;
            rep.witness_a = a;
            rep.witness_b = deterministic_nonzero(ann);
            return false;
        }
        return true;
    });
    return rep;
}

PrimeReport is_semiprime(const FiniteRing& R, const Caps& caps) {
    PrimeReport rep{true, std::nullopt, std::nullopt, 0};
    for_each_socle_element(R, caps.max_elements, [&](const Vec& a) {
        ++rep.scanned;
        Submodule I = principal_ideal(R, a);
        if (submodule_product(R, I, I).is_zero()) {
            rep.holds = false;
            rep.witness_a = a;
            rep.witness_b = a;
            return false;
        }
        return true;
    });
    return rep;
}

std::vector<Submodule> enumerate_ideals(const FiniteRing& R, const Caps& caps) {
    std::map<Mat, size_t> seen;
    std::vector<Submodule> out;
    auto add = [&](Submodule s) -> bool {
        if (seen.count(s.rows)) return false;
        if (out.size() + 1 > caps.max_ideals)
            throw CapExceeded("ideal_lattice",
                              "ideal lattice larger than " + std::to_string(caps.max_ideals));
        seen.emplace(s.rows, out.size());
        out.push_back(std::move(s));
        return true;
    };
    add(zero_submodule(R.modulus, R.rank));
    for_each_element(R, caps.max_elements, [&](const Vec& a) {
        add(principal_ideal(R, a));
        return true;
    });
    // close under joins
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            Submodule s = submodule_sum(out[i], out[j]);
            add(std::move(s));
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace gplab
