#include "gplab/constructions.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>

#include "gplab/zmod.hpp"

namespace gplab {

namespace {

uint64_t pow_sat(uint64_t base, uint64_t exp) {
    uint64_t r = 1;
    while (exp-- > 0) {
        if (r > UINT64_MAX / base) return UINT64_MAX;
        r *= base;
    }
    return r;
}

Mat reduced_rows(const Mat& M, uint32_t m) {
    Mat out = M;
    for (auto& row : out)
        for (auto& x : row) x %= m;
    return out;
}

Vec reduced_vec(const Vec& v, uint32_t m) {
    Vec out = v;
    for (auto& x : out) x %= m;
    return out;
}

bool is_identity_mat(const Mat& M, uint32_t k, uint32_t m) {
    if (M.size() != k) return false;
    for (uint32_t i = 0; i < k; ++i) {
        if (M[i].size() != k) return false;
        for (uint32_t j = 0; j < k; ++j)
            if (M[i][j] % m != (i == j ? 1u : 0u)) return false;
    }
    return true;
}

std::string deg_str(const GradeGroup& G, const Deg& g) { return G.to_string(g); }

const Submodule* nonzero_ideal_at(const PartialActionData& data, const Deg& g) {
    auto it = data.ideals.find(g);
    if (it == data.ideals.end() || it->second.is_zero()) return nullptr;
    return &it->second;
}

const Mat* map_rows_at(const PartialActionData& data, const Deg& g) {
    auto it = data.maps.find(g);
    return it == data.maps.end() ? nullptr : &it->second;
}

// Nonzero components in degree order, with the block offsets of the ring
// they assemble into.
struct PartialLayout {
    std::vector<Deg> supp;
    std::vector<const Submodule*> comp;
    std::vector<uint32_t> offset;
    uint32_t rank = 0;

    int find(const Deg& g) const {
        auto it = std::lower_bound(supp.begin(), supp.end(), g);
        if (it == supp.end() || *it != g) return -1;
        return static_cast<int>(it - supp.begin());
    }
};

PartialLayout make_layout(const PartialActionData& data) {
    PartialLayout L;
    for (const auto& [g, Dg] : data.ideals)
        if (!Dg.is_zero()) {
            L.supp.push_back(g);
            L.comp.push_back(&Dg);
        }
    for (size_t i = 0; i < L.supp.size(); ++i) {
        L.offset.push_back(L.rank);
        L.rank += static_cast<uint32_t>(L.comp[i]->rows.size());
    }
    return L;
}

void validate_partial_core(const FiniteRing& R, const GradeGroup& G,
                           const PartialActionData& data, bool with_composition) {
    const uint32_t m = R.modulus, k = R.rank;
    for (const auto& [g, Dg] : data.ideals) {
        G.validate(g);
        if (Dg.modulus != m || Dg.ncols != k)
            throw InputError("malformed_data", "component at " + deg_str(G, g) +
                                                   " does not live in the coefficient ring");
        if (!(ideal_from_gens(R, Dg.rows) == Dg))
            throw InputError("malformed_data",
                             "component at " + deg_str(G, g) + " is not an ideal");
    }
    PartialLayout L = make_layout(data);
    for (const Deg& g : L.supp)
        if (!nonzero_ideal_at(data, G.inv(g)))
            throw InputError("axiom_violation", "iso: component at " + deg_str(G, g) +
                                                    " has a zero inverse-degree partner");
    for (size_t i = 0; i < L.supp.size(); ++i) {
        const Deg& g = L.supp[i];
        for (const Vec& row : L.comp[i]->rows) {
            uint32_t piv = 0;
            for (uint32_t x : row)
                if (x) {
                    piv = x;
                    break;
                }
            if (zmod::gcd_u(piv, m) != 1)
                throw InputError("free_component_required",
                                 "component at " + deg_str(G, g) +
                                     " has a non-unit pivot and is not a free summand");
        }
        if (!local_identity(R, *L.comp[i]))
            throw InputError("not_s_unital",
                             "component at " + deg_str(G, g) + " has no local identity");
    }
    for (const auto& [g, M] : data.maps) {
        G.validate(g);
        const Submodule* Dg = nonzero_ideal_at(data, g);
        if (!Dg) {
            if (!M.empty())
                throw InputError("malformed_data", "map at " + deg_str(G, g) +
                                                       " has rows but its component is zero");
            continue;
        }
        const Submodule* Dinv = nonzero_ideal_at(data, G.inv(g));
        if (!Dinv || M.size() != Dinv->rows.size())
            throw InputError("malformed_data",
                             "map at " + deg_str(G, g) +
                                 " needs one row per basis row of the inverse-degree component");
        for (const Vec& row : M)
            if (row.size() != k)
                throw InputError("malformed_data",
                                 "map row at " + deg_str(G, g) + " has wrong length");
    }
    for (const Deg& g : L.supp)
        if (!map_rows_at(data, g))
            throw InputError("malformed_data", "no map at degree " + deg_str(G, g));

    const Deg e = G.identity();
    const Submodule* De = nonzero_ideal_at(data, e);
    if (!De || !(*De == full_submodule(m, k)))
        throw InputError("axiom_violation", "P1: the identity component must be the whole ring");
    if (!is_identity_mat(*map_rows_at(data, e), k, m))
        throw InputError("axiom_violation", "P1: the identity map must fix the ring pointwise");

    for (const Deg& g : L.supp) {
        const Submodule& Dg = *nonzero_ideal_at(data, g);
        const Submodule& Dinv = *nonzero_ideal_at(data, G.inv(g));
        Mat M = reduced_rows(*map_rows_at(data, g), m);
        for (size_t t = 0; t < M.size(); ++t)
            if (!Dg.contains(M[t]))
                throw InputError("axiom_violation", "iso: image of row " + std::to_string(t) +
                                                        " at " + deg_str(G, g) +
                                                        " leaves the component");
        if (!(span_submodule(m, k, M) == Dg) || Dinv.size() != Dg.size())
            throw InputError("axiom_violation",
                             "iso: map at " + deg_str(G, g) + " is not onto its component");
        for (size_t s = 0; s < Dinv.rows.size(); ++s)
            for (size_t t = 0; t < Dinv.rows.size(); ++t) {
                Vec lhs = partial_apply(R, G, data, g, R.mul(Dinv.rows[s], Dinv.rows[t]));
                Vec rhs = R.mul(M[s], M[t]);
                if (lhs != rhs)
                    throw InputError("axiom_violation",
                                     "iso: map at " + deg_str(G, g) +
                                         " breaks the product of rows " + std::to_string(s) +
                                         " and " + std::to_string(t));
            }
    }

    for (const Deg& g : L.supp) {
        std::set<Deg> hs;
        if (G.finite()) {
            for (uint32_t h = 0; h < G.group().order; ++h) hs.insert(Deg{int64_t(h)});
        } else {
            for (const Deg& s : L.supp) {
                hs.insert(s);
                hs.insert(G.mul(G.inv(g), s));
            }
        }
        const Submodule& Dgi = *nonzero_ideal_at(data, G.inv(g));
        for (const Deg& h : hs) {
            const Submodule* Dh = nonzero_ideal_at(data, h);
            const Submodule* Dgh = nonzero_ideal_at(data, G.mul(g, h));
            Submodule src = Dh ? submodule_product(R, Dgi, *Dh) : zero_submodule(m, k);
            Mat img;
            for (const Vec& r : src.rows) img.push_back(partial_apply(R, G, data, g, r));
            Submodule lhs = span_submodule(m, k, std::move(img));
            Submodule rhs = Dgh ? submodule_product(R, *nonzero_ideal_at(data, g), *Dgh)
                                : zero_submodule(m, k);
            if (!(lhs == rhs))
                throw InputError("axiom_violation", "P2: translation fails at (" +
                                                        deg_str(G, g) + "," + deg_str(G, h) +
                                                        ")");
        }
    }

    if (!with_composition) return;
    for (const Deg& h : L.supp)
        for (const Deg& kk : L.supp) {
            Deg g = G.mul(kk, G.inv(h));
            Submodule P = submodule_product(R, *nonzero_ideal_at(data, G.inv(h)),
                                            *nonzero_ideal_at(data, G.inv(kk)));
            for (const Vec& r : P.rows) {
                Vec inner = partial_apply(R, G, data, h, r);
                Vec lhs;
                if (!nonzero_ideal_at(data, G.inv(g))) {
                    if (!zmod::is_zero_vec(inner))
                        throw InputError("axiom_violation",
                                         "P3: composition fails at (" + deg_str(G, g) + "," +
                                             deg_str(G, h) + ")");
                    lhs = R.zero();
                } else {
                    lhs = partial_apply(R, G, data, g, inner);
                }
                if (lhs != partial_apply(R, G, data, kk, r))
                    throw InputError("axiom_violation", "P3: composition fails at (" +
                                                            deg_str(G, g) + "," +
                                                            deg_str(G, h) + ")");
            }
        }
}

// Coefficient of a block vector at supp index i, as an element of R.
Vec block_coeff(const FiniteRing& R, const PartialLayout& L, size_t i, const Vec& x) {
    Vec out = R.zero();
    for (size_t t = 0; t < L.comp[i]->rows.size(); ++t) {
        uint32_t c = x[L.offset[i] + t] % R.modulus;
        if (c) zmod::add_scaled_inplace(out, L.comp[i]->rows[t], c, R.modulus);
    }
    return out;
}

void add_into_block(const FiniteRing& R, const PartialLayout& L, Vec& acc, const Deg& d,
                    const Vec& w) {
    if (zmod::is_zero_vec(w)) return;
    int i = L.find(d);
    if (i < 0)
        throw TheoremViolation("partial_closure", "product escapes its degree component");
    auto c = zmod::solve_left(L.comp[i]->rows, w, R.modulus);
    if (!c) throw TheoremViolation("partial_closure", "product escapes its degree component");
    for (size_t t = 0; t < c->size(); ++t)
        acc[L.offset[i] + t] =
            static_cast<uint32_t>((acc[L.offset[i] + t] + uint64_t((*c)[t])) % R.modulus);
}

// Product of two elements in block coordinates, computed from the action
// data alone rather than from any assembled structure constants.
Vec data_mul(const FiniteRing& R, const GradeGroup& G, const PartialActionData& data,
             const PartialLayout& L, const Vec& x, const Vec& y) {
    const uint32_t m = R.modulus;
    Vec out(L.rank, 0);
    for (size_t ai = 0; ai < L.supp.size(); ++ai) {
        const Deg& a = L.supp[ai];
        const Mat& Ma = *map_rows_at(data, G.inv(a));  // rows follow the basis of D_a
        Vec au = R.zero();                             // alpha_{a^-1} of the a-coefficient
        bool nz = false;
        for (size_t t = 0; t < L.comp[ai]->rows.size(); ++t) {
            uint32_t c = x[L.offset[ai] + t] % m;
            if (!c) continue;
            nz = true;
            zmod::add_scaled_inplace(au, reduced_vec(Ma[t], m), c, m);
        }
        if (!nz) continue;
        for (size_t bi = 0; bi < L.supp.size(); ++bi) {
            Vec v = block_coeff(R, L, bi, y);
            if (zmod::is_zero_vec(v)) continue;
            Vec w = partial_apply(R, G, data, a, R.mul(au, v));
            add_into_block(R, L, out, G.mul(a, L.supp[bi]), w);
        }
    }
    return out;
}

// Shared assembly: one basis vector per component row, products computed by
// `mul` on (degree, row, degree, row) and re-expanded over the target block.
GradedRing assemble_blocks(const FiniteRing& R, const GradeGroup& G, const PartialLayout& L,
                           const std::function<Vec(size_t, size_t, size_t, size_t)>& mul,
                           std::optional<Vec> unit, const Caps& caps) {
    const uint32_t m = R.modulus;
    if (pow_sat(m, L.rank) > caps.max_elements)
        throw CapExceeded("ring_size", "constructed ring would exceed the element cap");
    std::vector<Vec> table(static_cast<size_t>(L.rank) * L.rank, Vec(L.rank, 0));
    std::vector<std::string> labels(L.rank);
    std::vector<Deg> degrees(L.rank);
    for (size_t ai = 0; ai < L.supp.size(); ++ai)
        for (size_t s = 0; s < L.comp[ai]->rows.size(); ++s) {
            labels[L.offset[ai] + s] = "u" + std::to_string(s) + "d" + deg_str(G, L.supp[ai]);
            degrees[L.offset[ai] + s] = L.supp[ai];
        }
    for (size_t ai = 0; ai < L.supp.size(); ++ai)
        for (size_t s = 0; s < L.comp[ai]->rows.size(); ++s)
            for (size_t bi = 0; bi < L.supp.size(); ++bi)
                for (size_t t = 0; t < L.comp[bi]->rows.size(); ++t) {
                    Vec w = mul(ai, s, bi, t);
                    Vec& row =
                        table[static_cast<size_t>(L.offset[ai] + s) * L.rank + L.offset[bi] + t];
                    add_into_block(R, L, row, G.mul(L.supp[ai], L.supp[bi]), w);
                }
    FiniteRing R0 = make_ring(m, L.rank, std::move(table), std::move(labels), std::move(unit));
    if (!R0.unit) {
        auto u = local_identity(R0, full_submodule(m, L.rank));
        if (u) R0.unit = *u;
    }
    return make_graded_ring(std::move(R0), G, std::move(degrees));
}

}  // namespace

// ---------------------------------------------------------------------------
// Global actions

Vec apply_map(const Mat& M, const Vec& v, uint32_t m) {
    if (v.size() != M.size())
        throw InputError("malformed_data", "coordinate count differs from row count");
    if (M.empty()) return {};
    Vec out(M[0].size(), 0);
    for (size_t i = 0; i < M.size(); ++i)
        zmod::add_scaled_inplace(out, reduced_vec(M[i], m), v[i] % m, m);
    return out;
}

SkewAction trivial_skew_action(const FiniteRing& R, const FiniteGroup& G) {
    Mat id(R.rank, Vec(R.rank, 0));
    for (uint32_t i = 0; i < R.rank; ++i) id[i][i] = 1;
    return SkewAction{std::vector<Mat>(G.order, id)};
}

void validate_skew_action(const FiniteRing& R, const FiniteGroup& G, const SkewAction& act) {
    const uint32_t m = R.modulus, k = R.rank;
    if (act.maps.size() != G.order)
        throw InputError("malformed_data", "need one matrix per group element");
    std::vector<Mat> M(G.order);
    for (uint32_t g = 0; g < G.order; ++g) {
        if (act.maps[g].size() != k)
            throw InputError("malformed_data",
                             "matrix of " + G.labels[g] + " has wrong row count");
        for (const Vec& row : act.maps[g])
            if (row.size() != k)
                throw InputError("malformed_data",
                                 "matrix of " + G.labels[g] + " has wrong row length");
        M[g] = reduced_rows(act.maps[g], m);
    }
    for (uint32_t g = 0; g < G.order; ++g) {
        for (uint32_t i = 0; i < k; ++i)
            for (uint32_t j = 0; j < k; ++j)
                if (apply_map(M[g], R.basis_product(i, j), m) != R.mul(M[g][i], M[g][j]))
                    throw InputError("not_automorphism",
                                     "map of " + G.labels[g] + " breaks the product of basis " +
                                         std::to_string(i) + " and " + std::to_string(j));
        if (!(span_submodule(m, k, M[g]) == full_submodule(m, k)))
            throw InputError("not_automorphism",
                             "map of " + G.labels[g] + " is not invertible");
    }
    for (uint32_t g = 0; g < G.order; ++g)
        for (uint32_t h = 0; h < G.order; ++h) {
            Mat comp(k);
            for (uint32_t i = 0; i < k; ++i) comp[i] = apply_map(M[g], M[h][i], m);
            if (comp != M[G.mul(g, h)])
                throw InputError("not_a_homomorphism",
                                 "maps of " + G.labels[g] + " and " + G.labels[h] +
                                     " do not compose to the map of " + G.labels[G.mul(g, h)]);
        }
}

GradedRing build_skew_group_ring(const FiniteRing& R, const FiniteGroup& G,
                                 const SkewAction& act, const Caps& caps) {
    validate_skew_action(R, G, act);
    const uint32_t m = R.modulus, k = R.rank;
    if (pow_sat(m, static_cast<uint64_t>(k) * G.order) > caps.max_elements)
        throw CapExceeded("ring_size", "group ring would exceed the element cap");
    std::vector<Mat> M(G.order);
    for (uint32_t g = 0; g < G.order; ++g) M[g] = reduced_rows(act.maps[g], m);
    const uint32_t rank = k * G.order;
    auto idx = [&](uint32_t g, uint32_t l) { return g * k + l; };
    std::vector<Vec> table(static_cast<size_t>(rank) * rank, Vec(rank, 0));
    std::vector<std::string> labels(rank);
    std::vector<Deg> degrees(rank);
    for (uint32_t g = 0; g < G.order; ++g)
        for (uint32_t l = 0; l < k; ++l) {
            labels[idx(g, l)] = R.labels[l] + "d" + G.labels[g];
            degrees[idx(g, l)] = Deg{int64_t(g)};
        }
    // (b_l d_g)(b_t d_h) = b_l alpha_g(b_t) d_{gh}
    for (uint32_t g = 0; g < G.order; ++g)
        for (uint32_t l = 0; l < k; ++l)
            for (uint32_t h = 0; h < G.order; ++h) {
                uint32_t gh = G.mul(g, h);
                for (uint32_t t = 0; t < k; ++t) {
                    Vec r = R.mul_basis_left(l, M[g][t]);
                    Vec& row = table[static_cast<size_t>(idx(g, l)) * rank + idx(h, t)];
                    for (uint32_t s = 0; s < k; ++s) row[idx(gh, s)] = r[s];
                }
            }
    std::optional<Vec> unit;
    if (R.unit) {
        Vec u(rank, 0);
        for (uint32_t l = 0; l < k; ++l) u[idx(G.identity, l)] = (*R.unit)[l];
        unit = std::move(u);
    }
    GradedRing S = make_graded_ring(
        make_ring(m, rank, std::move(table), std::move(labels), std::move(unit)),
        finite_grade_group(G), std::move(degrees));

    // A group action changes neither idempotency nor s-unitality of the
    // coefficients, and those decide the grading class of the result.
    Submodule full = full_submodule(m, k);
    bool idem = submodule_product(R, full, full) == full;
    bool su = is_s_unital(R, caps).s_unital;
    GradingFlags fl = classify_grading(S, caps);
    if (fl.strong != idem || fl.symmetric != idem)
        throw TheoremViolation("group_ring_classification",
                               "strong and symmetric flags must match idempotency of the "
                               "coefficient ring");
    if ((fl.ring_s_unital && fl.strong) != su || fl.nearly_epsilon_strong != su)
        throw TheoremViolation("group_ring_classification",
                               "s-unitality equivalences fail on the built ring");
    return S;
}

GradedRing build_group_ring(const FiniteRing& R, const FiniteGroup& G, const Caps& caps) {
    return build_skew_group_ring(R, G, trivial_skew_action(R, G), caps);
}

// ---------------------------------------------------------------------------
// Partial actions

void validate_partial_action(const FiniteRing& R, const GradeGroup& G,
                             const PartialActionData& data) {
    validate_partial_core(R, G, data, true);
}

Vec partial_apply(const FiniteRing& R, const GradeGroup& G, const PartialActionData& data,
                  const Deg& g, const Vec& r) {
    const uint32_t m = R.modulus;
    if (r.size() != R.rank) throw InputError("malformed_data", "element has wrong length");
    Vec rr = reduced_vec(r, m);
    const Submodule* dom = nonzero_ideal_at(data, G.inv(g));
    if (!dom) {
        if (!zmod::is_zero_vec(rr))
            throw InputError("malformed_data", "element lies outside the domain component");
        return R.zero();
    }
    auto c = zmod::solve_left(dom->rows, rr, m);
    if (!c) throw InputError("malformed_data", "element lies outside the domain component");
    const Mat* M = map_rows_at(data, g);
    if (!M || M->size() != dom->rows.size())
        throw InputError("malformed_data", "no map at degree " + deg_str(G, g));
    Vec out = R.zero();
    for (size_t t = 0; t < M->size(); ++t)
        zmod::add_scaled_inplace(out, reduced_vec((*M)[t], m), (*c)[t], m);
    return out;
}

PartialActionData global_action_data(const FiniteRing& R, const FiniteGroup& G,
                                     const SkewAction& act) {
    validate_skew_action(R, G, act);
    PartialActionData d;
    Submodule full = full_submodule(R.modulus, R.rank);
    for (uint32_t g = 0; g < G.order; ++g) {
        Deg dg{int64_t(g)};
        d.ideals[dg] = full;
        d.maps[dg] = reduced_rows(act.maps[g], R.modulus);
    }
    return d;
}

GradedRing build_partial_skew_group_ring(const FiniteRing& R, const GradeGroup& G,
                                         const PartialActionData& data, const Caps& caps) {
    validate_partial_action(R, G, data);
    PartialLayout L = make_layout(data);
    const uint32_t m = R.modulus;
    // (u d_a)(v d_b) = alpha_a(alpha_{a^-1}(u) v) d_{ab}
    auto mul = [&](size_t ai, size_t s, size_t bi, size_t t) {
        const Mat& Ma = *map_rows_at(data, G.inv(L.supp[ai]));
        Vec au = reduced_vec(Ma[s], m);
        Vec p = R.mul(au, L.comp[bi]->rows[t]);
        return partial_apply(R, G, data, L.supp[ai], p);
    };
    GradedRing S = assemble_blocks(R, G, L, mul, std::nullopt, caps);
    if (!classify_grading(S, caps).nearly_epsilon_strong)
        throw TheoremViolation("partial_skew_not_nearly",
                               "built ring fails the nearly epsilon-strong classification");
    return S;
}

void validate_twisted_partial(const FiniteRing& R, const GradeGroup& G,
                              const TwistedPartialData& data) {
    if (!R.unit) throw InputError("unital_required", "coefficient ring must be unital");
    validate_partial_core(R, G, data.base, false);
    const uint32_t m = R.modulus, k = R.rank;
    PartialLayout L = make_layout(data.base);
    const Deg e = G.identity();

    for (const auto& [g, u] : data.units) {
        G.validate(g);
        if (u.size() != k)
            throw InputError("malformed_data",
                             "identity at " + deg_str(G, g) + " has wrong length");
        if (!nonzero_ideal_at(data.base, g) && !zmod::is_zero_vec(reduced_vec(u, m)))
            throw InputError("malformed_data",
                             "identity declared at the zero component " + deg_str(G, g));
    }
    std::map<Deg, Vec> unit_of;
    for (size_t i = 0; i < L.supp.size(); ++i) {
        const Deg& g = L.supp[i];
        auto it = data.units.find(g);
        if (it == data.units.end())
            throw InputError("malformed_data", "no identity declared at " + deg_str(G, g));
        Vec u = reduced_vec(it->second, m);
        auto li = local_identity(R, *L.comp[i]);
        if (!li || u != *li)
            throw InputError("malformed_data", "declared identity at " + deg_str(G, g) +
                                                   " is not the identity of its component");
        // identities of two-sided ideals are central; a failure here is a bug
        for (uint32_t j = 0; j < k; ++j)
            if (R.mul_basis_right(u, j) != R.mul_basis_left(j, u))
                throw TheoremViolation("unit_not_central", "component identity at " +
                                                               deg_str(G, g) +
                                                               " fails to be central");
        unit_of[g] = std::move(u);
    }
    auto unit_at = [&](const Deg& g) -> Vec {
        auto it = unit_of.find(g);
        return it == unit_of.end() ? R.zero() : it->second;
    };
    auto prod_ideal = [&](const Deg& g, const Deg& h) -> Submodule {
        const Submodule* A = nonzero_ideal_at(data.base, g);
        const Submodule* B = nonzero_ideal_at(data.base, G.mul(g, h));
        if (!A || !B) return zero_submodule(m, k);
        return submodule_product(R, *A, *B);
    };
    for (const auto& [key, w] : data.twists) {
        G.validate(key.first);
        G.validate(key.second);
        if (w.size() != k)
            throw InputError("malformed_data", "twist at (" + deg_str(G, key.first) + "," +
                                                   deg_str(G, key.second) +
                                                   ") has wrong length");
        if (!prod_ideal(key.first, key.second).contains(reduced_vec(w, m)))
            throw InputError("malformed_data", "twist at (" + deg_str(G, key.first) + "," +
                                                   deg_str(G, key.second) +
                                                   ") lies outside its product component");
    }
    auto twist_at = [&](const Deg& g, const Deg& h) -> Vec {
        auto it = data.twists.find({g, h});
        if (it != data.twists.end()) return reduced_vec(it->second, m);
        return R.mul(unit_at(g), unit_at(G.mul(g, h)));
    };

    std::map<std::pair<Deg, Deg>, Vec> inv_of;
    for (const Deg& g : L.supp)
        for (const Deg& gh : L.supp) {
            Deg h = G.mul(G.inv(g), gh);
            Submodule E = prod_ideal(g, h);
            if (E.is_zero()) continue;
            Vec w = twist_at(g, h);
            Vec ue = R.mul(unit_at(g), unit_at(gh));
            Mat Mw;
            for (const Vec& row : E.rows) Mw.push_back(R.mul(row, w));
            auto c = zmod::solve_left(Mw, ue, m);
            Vec y = R.zero();
            if (c)
                for (size_t t = 0; t < c->size(); ++t)
                    zmod::add_scaled_inplace(y, E.rows[t], (*c)[t], m);
            if (!c || R.mul(w, y) != ue || R.mul(y, w) != ue)
                throw InputError("not_invertible",
                                 "twist at (" + deg_str(G, g) + "," + deg_str(G, h) +
                                     ") has no inverse in its product component");
            inv_of[{g, h}] = std::move(y);
        }
    auto twist_inv_at = [&](const Deg& g, const Deg& h) -> Vec {
        auto it = inv_of.find({g, h});
        return it == inv_of.end() ? R.zero() : it->second;
    };

    for (const Deg& g : L.supp)
        if (twist_at(e, g) != unit_at(g) || twist_at(g, e) != unit_at(g))
            throw InputError("axiom_violation",
                             "UP4: twist with the identity degree must be the component "
                             "identity at " +
                                 deg_str(G, g));

    for (const Deg& h : L.supp)
        for (const Deg& gh : L.supp) {
            Deg g = G.mul(gh, G.inv(h));
            Submodule P = submodule_product(R, *nonzero_ideal_at(data.base, G.inv(h)),
                                            *nonzero_ideal_at(data.base, G.inv(gh)));
            if (P.is_zero()) continue;
            Vec w = twist_at(g, h), wi = twist_inv_at(g, h);
            for (const Vec& r : P.rows) {
                Vec inner = partial_apply(R, G, data.base, h, r);
                Vec lhs;
                if (!nonzero_ideal_at(data.base, G.inv(g))) {
                    if (!zmod::is_zero_vec(inner))
                        throw InputError("axiom_violation",
                                         "UP3: twisted composition fails at (" +
                                             deg_str(G, g) + "," + deg_str(G, h) + ")");
                    lhs = R.zero();
                } else {
                    lhs = partial_apply(R, G, data.base, g, inner);
                }
                Vec rhs = R.mul(R.mul(w, partial_apply(R, G, data.base, gh, r)), wi);
                if (lhs != rhs)
                    throw InputError("axiom_violation", "UP3: twisted composition fails at (" +
                                                            deg_str(G, g) + "," +
                                                            deg_str(G, h) + ")");
            }
        }

    for (const Deg& g : L.supp)
        for (const Deg& h : L.supp)
            for (const Deg& hl : L.supp) {
                Deg l = G.mul(G.inv(h), hl);
                Submodule P = submodule_product(
                    R,
                    submodule_product(R, *nonzero_ideal_at(data.base, G.inv(g)),
                                      *nonzero_ideal_at(data.base, h)),
                    *nonzero_ideal_at(data.base, hl));
                if (P.is_zero()) continue;
                Vec w_h_l = twist_at(h, l), w_g_hl = twist_at(g, hl);
                Vec w_g_h = twist_at(g, h), w_gh_l = twist_at(G.mul(g, h), l);
                for (const Vec& r : P.rows) {
                    Vec lhs = R.mul(partial_apply(R, G, data.base, g, R.mul(r, w_h_l)), w_g_hl);
                    Vec rhs =
                        R.mul(R.mul(partial_apply(R, G, data.base, g, r), w_g_h), w_gh_l);
                    if (lhs != rhs)
                        throw InputError("axiom_violation",
                                         "UP5: cocycle fails at (" + deg_str(G, g) + "," +
                                             deg_str(G, h) + "," + deg_str(G, l) + ")");
                }
            }
}

GradedRing build_partial_crossed_product(const FiniteRing& R, const GradeGroup& G,
                                         const TwistedPartialData& data, const Caps& caps) {
    validate_twisted_partial(R, G, data);
    PartialLayout L = make_layout(data.base);
    const uint32_t m = R.modulus;
    auto unit_at = [&](const Deg& g) -> Vec {
        auto it = data.units.find(g);
        return it == data.units.end() ? R.zero() : reduced_vec(it->second, m);
    };
    auto twist_at = [&](const Deg& g, const Deg& h) -> Vec {
        auto it = data.twists.find({g, h});
        if (it != data.twists.end()) return reduced_vec(it->second, m);
        return R.mul(unit_at(g), unit_at(G.mul(g, h)));
    };
    // (u d_g)(v d_h) = u alpha_g(v 1_{g^-1}) w_{g,h} d_{gh}
    auto mul = [&](size_t ai, size_t s, size_t bi, size_t t) {
        const Deg& a = L.supp[ai];
        const Deg& b = L.supp[bi];
        Vec x = R.mul(L.comp[bi]->rows[t], unit_at(G.inv(a)));
        Vec y = partial_apply(R, G, data.base, a, x);
        return R.mul(R.mul(L.comp[ai]->rows[s], y), twist_at(a, b));
    };
    int ei = L.find(G.identity());
    Vec unit(L.rank, 0);
    for (uint32_t l = 0; l < R.rank; ++l) unit[L.offset[ei] + l] = (*R.unit)[l];
    GradedRing S = assemble_blocks(R, G, L, mul, unit, caps);
    if (!classify_grading(S, caps).epsilon_strong)
        throw TheoremViolation("crossed_not_epsilon_strong",
                               "built ring fails the epsilon-strong classification");
    return S;
}

// ---------------------------------------------------------------------------
// Matrix gradings

GradedRing build_matrix_graded(const FiniteRing& R, uint32_t n, MatrixGradeMode mode,
                               const Caps& caps) {
    FiniteRing M = matrix_ring(R, n);
    if (M.element_count() > caps.max_elements)
        throw CapExceeded("ring_size", "matrix ring would exceed the element cap");
    const uint32_t k = R.rank;
    std::vector<Deg> degrees(M.rank);
    GradeGroup G = mode == MatrixGradeMode::Integer ? lattice_grade_group(1)
                                                    : finite_grade_group(cyclic_group(n));
    for (uint32_t b = 0; b < M.rank; ++b) {
        uint32_t cell = b / k;
        int64_t i = cell / n, j = cell % n;
        degrees[b] = mode == MatrixGradeMode::Integer ? Deg{i - j} : Deg{(i + n - j) % n};
    }
    GradedRing S = make_graded_ring(std::move(M), std::move(G), std::move(degrees));
    if (is_s_unital(R, caps).s_unital) {
        GradingFlags fl = classify_grading(S, caps);
        if (mode == MatrixGradeMode::Integer && !fl.nearly_epsilon_strong)
            throw TheoremViolation("matrix_classification",
                                   "integer-graded matrix ring fails the nearly "
                                   "epsilon-strong classification");
        if (mode == MatrixGradeMode::IntegerModN && !fl.strong)
            throw TheoremViolation("matrix_classification",
                                   "cyclically graded matrix ring fails the strong "
                                   "classification");
    }
    return S;
}

// ---------------------------------------------------------------------------
// The group-ring primeness criterion

ConnellReport connell_decision(bool ring_is_prime, const SymbolicGroup& G) {
    GroupPredicates p = symbolic_predicates(G);
    ConnellReport rep;
    rep.ring_prime = ring_is_prime;
    rep.group_obstruction = p.has_nontrivial_finite_normal_subgroup;
    rep.prime = ring_is_prime && !rep.group_obstruction;
    return rep;
}

ConnellReport connell_decision(const FiniteRing& R, const SymbolicGroup& G, const Caps& caps) {
    if (!is_s_unital(R, caps).s_unital)
        throw InputError("not_s_unital", "coefficient ring must be s-unital");
    ConnellReport rep = connell_decision(is_prime(R, caps).holds, G);
    GroupPredicates p = symbolic_predicates(G);
    if (p.is_finite) {
        FiniteGroup T = symbolic_to_table(G);
        if (T.order <= caps.max_group_order &&
            pow_sat(R.modulus, static_cast<uint64_t>(R.rank) * T.order) <= caps.max_elements) {
            PrimenessReport d = decide_prime(build_group_ring(R, T, caps),
                                             PrimeStrategy::Auto, caps);
            if (d.prime != rep.prime)
                throw TheoremViolation("connell_mismatch",
                                       "criterion disagrees with the graded decision");
            rep.cross_check = std::move(d);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Invariance and primeness through the partial-action data

bool partial_invariance(const FiniteRing& R, const GradeGroup& G,
                        const PartialActionData& data, const Submodule& I,
                        const GradedSubgroup& H) {
    validate_partial_action(R, G, data);
    if (I.modulus != R.modulus || I.ncols != R.rank)
        throw InputError("malformed_data", "ideal does not live in the coefficient ring");
    if (!(ideal_from_gens(R, I.rows) == I))
        throw InputError("malformed_data", "submodule is not an ideal");
    const uint32_t m = R.modulus, k = R.rank;
    bool contain = true, equal = true;
    for (const auto& [h, Dh] : data.ideals) {
        if (Dh.is_zero()) continue;
        if (!grade_subgroup_contains(G, H, h)) continue;
        Submodule src = submodule_product(R, I, *nonzero_ideal_at(data, G.inv(h)));
        Mat img;
        for (const Vec& r : src.rows) img.push_back(partial_apply(R, G, data, h, r));
        Submodule A = span_submodule(m, k, std::move(img));
        if (!A.subset_of(I)) contain = false;
        if (!(A == submodule_product(R, I, Dh))) equal = false;
    }
    if (contain != equal)
        throw TheoremViolation("invariance_equality",
                               "containment and equality forms of invariance disagree");
    return contain;
}

namespace {

// Re-derives a found datum from the action data alone: the subgroup pair,
// the invariance and outside-annihilation of the unembedded ideal, and the
// subring conditions over the components of N.
void verify_datum_against_data(const FiniteRing& R, const GradeGroup& G,
                               const PartialActionData& data, const NPDatum& dm) {
    const FiniteGroup& FG = G.group();
    const uint32_t m = R.modulus, k = R.rank;
    PartialLayout L = make_layout(data);
    auto fail = [](const std::string& msg) {
        throw TheoremViolation("partial_translation", msg);
    };
    if (!is_normal(FG, dm.N, dm.H)) fail("witness subgroup pair is not normal");

    int ei = L.find(G.identity());
    Mat irows;
    for (const Vec& row : dm.I.rows) {
        for (size_t p = 0; p < row.size(); ++p)
            if (row[p] % m && (p < L.offset[ei] || p >= L.offset[ei] + k))
                fail("witness ideal is not concentrated in the identity component");
        irows.push_back(Vec(row.begin() + L.offset[ei], row.begin() + L.offset[ei] + k));
    }
    Submodule IR = span_submodule(m, k, std::move(irows));
    if (IR.is_zero()) fail("witness ideal vanishes in the coefficient ring");
    if (!(ideal_from_gens(R, IR.rows) == IR))
        fail("witness does not unembed to an ideal of the coefficient ring");
    if (!partial_invariance(R, G, data, IR, from_finite_subgroup(dm.H)))
        fail("witness ideal is not invariant under its subgroup");

    for (uint32_t g = 0; g < FG.order; ++g) {
        if (dm.H.contains(g)) continue;
        Deg dg{int64_t(g)};
        const Submodule* Dg = nonzero_ideal_at(data, dg);
        if (!Dg) continue;
        Submodule A = submodule_product(R, IR, *Dg);
        Submodule src = submodule_product(R, IR, *nonzero_ideal_at(data, G.inv(dg)));
        Mat img;
        for (const Vec& r : src.rows) img.push_back(partial_apply(R, G, data, dg, r));
        Submodule B = span_submodule(m, k, std::move(img));
        if (!submodule_product(R, A, B).is_zero())
            fail("outside annihilation fails at " + FG.labels[g]);
    }

    if (dm.A_tilde.is_zero() || dm.B_tilde.is_zero()) fail("witness ideals must be nonzero");
    std::vector<Vec> nbasis;
    for (uint32_t n : dm.N.elems) {
        int i = L.find(Deg{int64_t(n)});
        if (i < 0) continue;
        for (size_t t = 0; t < L.comp[i]->rows.size(); ++t) {
            Vec bv(L.rank, 0);
            bv[L.offset[i] + t] = 1;
            nbasis.push_back(std::move(bv));
        }
    }
    auto check_side = [&](const Submodule& X, const std::string& name) {
        for (const Vec& a : X.rows) {
            for (size_t i = 0; i < L.supp.size(); ++i) {
                Vec coeff = block_coeff(R, L, i, a);
                if (zmod::is_zero_vec(coeff)) continue;
                if (G.finite() && !dm.N.contains(static_cast<uint32_t>(L.supp[i][0])))
                    fail(name + " leaves the subring components");
                if (!submodule_product(R, IR, *L.comp[i]).contains(coeff))
                    fail(name + " is not inside the induced ideal");
            }
            for (const Vec& bv : nbasis) {
                if (!X.contains(data_mul(R, G, data, L, bv, a)) ||
                    !X.contains(data_mul(R, G, data, L, a, bv)))
                    fail(name + " is not an ideal of the subring");
            }
        }
    };
    check_side(dm.A_tilde, "first witness ideal");
    check_side(dm.B_tilde, "second witness ideal");

    for (uint32_t h : dm.H.elems) {
        int i = L.find(Deg{int64_t(h)});
        if (i < 0) continue;
        for (size_t t = 0; t < L.comp[i]->rows.size(); ++t) {
            Vec dv(L.rank, 0);
            dv[L.offset[i] + t] = 1;
            for (const Vec& a : dm.A_tilde.rows) {
                Vec left = data_mul(R, G, data, L, a, dv);
                for (const Vec& b : dm.B_tilde.rows)
                    if (!zmod::is_zero_vec(data_mul(R, G, data, L, left, b)))
                        fail("triple product fails to vanish at " + FG.labels[h]);
            }
        }
    }
}

}  // namespace

PartialPrimeReport partial_prime_conditions(const FiniteRing& R, const GradeGroup& G,
                                            const PartialActionData& data, const Caps& caps) {
    GradedRing S = build_partial_skew_group_ring(R, G, data, caps);
    PartialPrimeReport out;
    out.decision = decide_prime(S, PrimeStrategy::Auto, caps);
    out.not_prime = !out.decision.prime;
    out.datum = out.decision.datum;
    if (out.datum && G.finite()) {
        verify_datum_against_data(R, G, data, *out.datum);
        out.conditions_verified = true;
    }
    return out;
}

}  // namespace gplab
