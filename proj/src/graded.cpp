#include "gplab/graded.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>

#include "gplab/zmod.hpp"

namespace gplab {

// --------------------------------------------------------------------------
// GradeGroup

Deg GradeGroup::identity() const {
    if (finite()) return Deg{static_cast<int64_t>(group().identity)};
    return Deg(lattice_rank(), 0);
}

Deg GradeGroup::mul(const Deg& a, const Deg& b) const {
    if (finite())
        return Deg{static_cast<int64_t>(
            group().mul(static_cast<uint32_t>(a[0]), static_cast<uint32_t>(b[0])))};
    Deg r(lattice_rank());
    for (size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Deg GradeGroup::inv(const Deg& a) const {
    if (finite())
        return Deg{static_cast<int64_t>(group().inv(static_cast<uint32_t>(a[0])))};
    Deg r(lattice_rank());
    for (size_t i = 0; i < r.size(); ++i) r[i] = -a[i];
    return r;
}

void GradeGroup::validate(const Deg& a) const {
    if (finite()) {
        if (a.size() != 1 || a[0] < 0 || a[0] >= static_cast<int64_t>(group().order))
            throw InputError("bad_degree", "degree is not an element of the grade group");
    } else if (a.size() != lattice_rank()) {
        throw InputError("bad_degree", "degree tuple length does not match lattice rank");
    }
}

std::string GradeGroup::to_string(const Deg& a) const {
    if (finite()) return group().labels[static_cast<uint32_t>(a[0])];
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ')';
    return os.str();
}

bool GradeGroup::same_as(const GradeGroup& o) const {
    if (finite() != o.finite()) return false;
    if (!finite()) return lattice_rank() == o.lattice_rank();
    return group().order == o.group().order && group().table == o.group().table;
}

GradeGroup finite_grade_group(FiniteGroup g) { return GradeGroup{std::move(g)}; }
GradeGroup lattice_grade_group(uint32_t rank) { return GradeGroup{rank}; }

// --------------------------------------------------------------------------
// GradedRing

std::vector<Deg> GradedRing::support() const {
    std::vector<Deg> out;
    out.reserve(blocks.size());
    for (const auto& [d, idx] : blocks) out.push_back(d);
    return out;
}

const std::vector<uint32_t>* GradedRing::block(const Deg& x) const {
    auto it = blocks.find(x);
    return it == blocks.end() ? nullptr : &it->second;
}

Submodule GradedRing::component(const Deg& x) const {
    const auto* b = block(x);
    if (!b) return zero_submodule(ring.modulus, ring.rank);
    Mat gens;
    for (uint32_t i : *b) gens.push_back(ring.basis(i));
    return span_submodule(ring.modulus, ring.rank, std::move(gens));
}

GradedRing make_graded_ring(FiniteRing ring, GradeGroup group, std::vector<Deg> degrees) {
    if (degrees.size() != ring.rank)
        throw InputError("bad_grading", "one degree per basis vector required");
    for (const Deg& d : degrees) group.validate(d);

    GradedRing S{std::move(ring), std::move(group), std::move(degrees), {}};
    for (uint32_t i = 0; i < S.ring.rank; ++i) S.blocks[S.degrees[i]].push_back(i);

    // every structure constant must live in the block of the product degree
    for (uint32_t i = 0; i < S.ring.rank; ++i) {
        for (uint32_t j = 0; j < S.ring.rank; ++j) {
            Deg xy = S.group.mul(S.degrees[i], S.degrees[j]);
            for (uint32_t t : S.ring.support[i * S.ring.rank + j]) {
                if (S.degrees[t] != xy)
                    throw InputError("bad_grading",
                                     "product of basis " + std::to_string(i) + " and " +
                                         std::to_string(j) + " meets basis " +
                                         std::to_string(t) + " outside its degree block");
            }
        }
    }
    return S;
}

Submodule component_product(const GradedRing& S, const Deg& x, const Deg& y) {
    const auto* bx = S.block(x);
    const auto* by = S.block(y);
    Mat gens;
    if (bx && by)
        for (uint32_t u : *bx)
            for (uint32_t v : *by) gens.push_back(S.ring.basis_product(u, v));
    return span_submodule(S.ring.modulus, S.ring.rank, std::move(gens));
}

// --------------------------------------------------------------------------
// helpers

namespace {

// span(S_x S_{x^-1} S_x)
Submodule triple_product(const GradedRing& S, const Deg& x) {
    const auto* bx = S.block(x);
    const auto* bi = S.block(S.group.inv(x));
    Mat gens;
    if (bx && bi)
        for (uint32_t a : *bx)
            for (uint32_t u : *bi)
                for (uint32_t v : *bx)
                    gens.push_back(S.ring.mul(S.ring.basis_product(a, u), S.ring.basis(v)));
    return span_submodule(S.ring.modulus, S.ring.rank, std::move(gens));
}

void check_component_cap(const GradedRing& S, const std::vector<uint32_t>& block,
                         const Caps& caps) {
    uint64_t n = 1;
    for (size_t i = 0; i < block.size(); ++i) {
        n *= S.ring.modulus;
        if (n > caps.max_elements)
            throw CapExceeded("component_enumeration",
                              "component has more than max_elements elements");
    }
}

// nonzero elements of the span of a block, in mixed-radix order
void for_each_block_element(const GradedRing& S, const std::vector<uint32_t>& block,
                            const std::function<bool(const Vec&)>& f) {
    Submodule c = span_submodule(S.ring.modulus, S.ring.rank, [&] {
        Mat g;
        for (uint32_t i : block) g.push_back(S.ring.basis(i));
        return g;
    }());
    bool first = true;
    for_each_submodule_element(c, [&](const Vec& v) {
        if (first) {  // skip zero
            first = false;
            return true;
        }
        return f(v);
    });
}

// prime-torsion elements of a block: for p | m in ascending order, the
// nonzero multiples (m/p)*w with w over the block coordinates
void for_each_block_socle(const GradedRing& S, const std::vector<uint32_t>& block,
                          const Caps& caps, const std::function<bool(const Vec&)>& f) {
    const uint32_t m = S.ring.modulus;
    for (uint32_t p : prime_divisors(m)) {
        uint64_t count = 1;
        for (size_t i = 0; i < block.size(); ++i) {
            count *= p;
            if (count > caps.max_elements)
                throw CapExceeded("socle_enumeration",
                                  "torsion slice exceeds max_elements");
        }
        const uint32_t step = m / p;
        std::vector<uint32_t> w(block.size(), 0);
        for (uint64_t it = 1; it < count; ++it) {
            for (size_t i = 0; i < block.size(); ++i) {
                if (++w[i] < p) break;
                w[i] = 0;
            }
            Vec v(S.ring.rank, 0);
            for (size_t i = 0; i < block.size(); ++i) v[block[i]] = (w[i] * step) % m;
            if (!f(v)) return;
        }
    }
}

bool member_of_span(const Mat& gens, const Vec& v, uint32_t m) {
    Mat hf = zmod::howell_form(gens, m, v.size());
    return zmod::member(hf, v, m);
}

}  // namespace

// --------------------------------------------------------------------------
// classification

GradingFlags classify_grading(const GradedRing& S, const Caps& caps) {
    const FiniteRing& R = S.ring;
    const uint32_t m = R.modulus;
    GradingFlags flags;

    std::vector<Deg> supp = S.support();
    std::map<Deg, Submodule> corner;   // x -> span(S_x S_{x^-1})
    for (const Deg& x : supp) corner.emplace(x, component_product(S, x, S.group.inv(x)));

    bool supp_symmetric = true;
    for (const Deg& x : supp)
        if (!S.in_support(S.group.inv(x))) supp_symmetric = false;

    // strong: S_x S_y = S_{xy} for all pairs.  Impossible over a lattice
    // (finite support) and impossible when the support misses a group element.
    if (S.group.finite()) {
        const uint32_t n = S.group.group().order;
        if (supp.size() == n) {
            flags.strong = true;
            for (uint32_t a = 0; a < n && flags.strong; ++a)
                for (uint32_t b = 0; b < n && flags.strong; ++b) {
                    Deg x{static_cast<int64_t>(a)}, y{static_cast<int64_t>(b)};
                    if (!(component_product(S, x, y) == S.component(S.group.mul(x, y))))
                        flags.strong = false;
                }
        }
    }

    // symmetric: S_x ⊆ S_x S_{x^-1} S_x, a module condition per degree
    flags.symmetric = true;
    for (const Deg& x : supp) {
        Submodule t = triple_product(S, x);
        for (uint32_t i : *S.block(x))
            if (!t.contains(R.basis(i))) flags.symmetric = false;
    }

    // epsilon-strong: per degree a joint unit eps_x in S_x S_{x^-1} that is a
    // left identity on S_x and a right identity on S_{x^-1}
    std::map<Deg, Vec> eps;
    flags.epsilon_strong = supp_symmetric;
    if (flags.epsilon_strong) {
        for (const Deg& x : supp) {
            const auto& bx = *S.block(x);
            const auto& bi = *S.block(S.group.inv(x));
            const Mat& w = corner.at(x).rows;
            if (w.empty()) {
                flags.epsilon_strong = false;
                break;
            }
            const size_t cols = (bx.size() + bi.size()) * R.rank;
            Mat gens(w.size(), Vec(cols, 0));
            Vec rhs(cols, 0);
            for (size_t r = 0; r < w.size(); ++r) {
                size_t off = 0;
                for (uint32_t s : bx) {
                    Vec prod = R.mul_basis_right(w[r], s);  // w * b_s
                    std::copy(prod.begin(), prod.end(), gens[r].begin() + off);
                    off += R.rank;
                }
                for (uint32_t u : bi) {
                    Vec prod = R.mul_basis_left(u, w[r]);  // b_u * w
                    std::copy(prod.begin(), prod.end(), gens[r].begin() + off);
                    off += R.rank;
                }
            }
            size_t off = 0;
            for (uint32_t s : bx) {
                Vec b = R.basis(s);
                std::copy(b.begin(), b.end(), rhs.begin() + off);
                off += R.rank;
            }
            for (uint32_t u : bi) {
                Vec b = R.basis(u);
                std::copy(b.begin(), b.end(), rhs.begin() + off);
                off += R.rank;
            }
            auto sol = zmod::solve_left(gens, rhs, m);
            if (!sol) {
                flags.epsilon_strong = false;
                break;
            }
            Vec e(R.rank, 0);
            for (size_t r = 0; r < w.size(); ++r)
                zmod::add_scaled_inplace(e, w[r], (*sol)[r], m);
            eps.emplace(x, std::move(e));
        }
    }
    if (flags.epsilon_strong) {
        for (const Deg& x : supp)
            flags.epsilon_witnesses.push_back(
                EpsilonWitness{x, eps.at(x), eps.at(S.group.inv(x))});
    }

    // nearly epsilon-strong, route 1: every homogeneous s has local units
    // s ∈ S_x S_{x^-1} s and s ∈ s S_{x^-1} S_x
    bool nearly_elementwise = true;
    for (const Deg& x : supp) {
        if (!nearly_elementwise) break;
        check_component_cap(S, *S.block(x), caps);
        const Mat& w = corner.at(x).rows;
        Submodule cp = component_product(S, S.group.inv(x), x);
        const Mat& wp = cp.rows;
        for_each_block_element(S, *S.block(x), [&](const Vec& s) {
            Mat left, right;
            for (const Vec& r : w) left.push_back(R.mul(r, s));
            for (const Vec& r : wp) right.push_back(R.mul(s, r));
            if (!member_of_span(left, s, m) || !member_of_span(right, s, m)) {
                nearly_elementwise = false;
                return false;
            }
            return true;
        });
    }

    // route 2: symmetric and every corner subring S_x S_{x^-1} is s-unital
    // (for finite rings: has an identity)
    bool nearly_corners = flags.symmetric;
    for (const Deg& x : supp) {
        if (!nearly_corners) break;
        if (!local_identity(R, corner.at(x))) nearly_corners = false;
    }
    if (nearly_elementwise != nearly_corners)
        throw TheoremViolation("nearly_route_mismatch",
                               "elementwise local units disagree with the "
                               "symmetric + s-unital corner criterion");
    flags.nearly_epsilon_strong = nearly_elementwise;

    // non-degenerate: no nonzero s in S_x with s S_{x^-1} = 0 or S_{x^-1} s = 0
    flags.non_degenerate = true;
    for (const Deg& x : supp) {
        const auto& bx = *S.block(x);
        const auto* bi = S.block(S.group.inv(x));
        const size_t cols = (bi ? bi->size() : 0) * R.rank;
        Mat rgens(bx.size(), Vec(cols, 0)), lgens(bx.size(), Vec(cols, 0));
        for (size_t r = 0; r < bx.size(); ++r) {
            size_t off = 0;
            if (bi)
                for (uint32_t u : *bi) {
                    const Vec& pr = R.basis_product(bx[r], u);
                    std::copy(pr.begin(), pr.end(), rgens[r].begin() + off);
                    const Vec& pl = R.basis_product(u, bx[r]);
                    std::copy(pl.begin(), pl.end(), lgens[r].begin() + off);
                    off += R.rank;
                }
        }
        if (!zmod::kernel_left(rgens, m).empty() || !zmod::kernel_left(lgens, m).empty())
            flags.non_degenerate = false;
    }

    flags.ring_s_unital = is_s_unital(R, caps).s_unital;
    flags.principal_s_unital =
        static_cast<bool>(local_identity(R, S.component(S.e())));

    // known implications between the classes; a violation here is a bug
    const bool unital_strong = flags.strong && R.unit.has_value();
    if (unital_strong && !flags.epsilon_strong)
        throw TheoremViolation("classifier_implication",
                               "unital strong grading failed the epsilon-strong test");
    if (flags.epsilon_strong && !flags.nearly_epsilon_strong)
        throw TheoremViolation("classifier_implication",
                               "epsilon-strong grading failed the nearly test");
    if (flags.nearly_epsilon_strong &&
        (!flags.symmetric || !flags.non_degenerate || !flags.ring_s_unital ||
         !flags.principal_s_unital))
        throw TheoremViolation("classifier_implication",
                               "nearly epsilon-strong grading lost an implied property");
    return flags;
}

bool is_cancellative_epsilon_strong(const GradedRing& S, const Caps& caps) {
    GradingFlags flags = classify_grading(S, caps);
    if (!flags.epsilon_strong)
        throw InputError("not_epsilon_strong",
                         "cancellativity is defined for epsilon-strong gradings");
    const FiniteRing& R = S.ring;
    bool cancellative = true;
    if (!S.group.finite()) {
        cancellative = false;  // infinitely many degrees with S_x = 0
    } else {
        const uint32_t n = S.group.group().order;
        if (S.blocks.size() < n) cancellative = false;  // empty degree annihilates
        for (uint32_t a = 0; a < n && cancellative; ++a) {
            const auto* bx = S.block(Deg{static_cast<int64_t>(a)});
            if (!bx) break;
            Mat rgens(R.rank, Vec(bx->size() * R.rank, 0));
            Mat lgens(R.rank, Vec(bx->size() * R.rank, 0));
            for (uint32_t j = 0; j < R.rank; ++j) {
                size_t off = 0;
                for (uint32_t s : *bx) {
                    const Vec& pr = R.basis_product(s, j);  // right annihilator side
                    std::copy(pr.begin(), pr.end(), rgens[j].begin() + off);
                    const Vec& pl = R.basis_product(j, s);
                    std::copy(pl.begin(), pl.end(), lgens[j].begin() + off);
                    off += R.rank;
                }
            }
            if (!zmod::kernel_left(rgens, R.modulus).empty() ||
                !zmod::kernel_left(lgens, R.modulus).empty())
                cancellative = false;
        }
    }
    if (cancellative != flags.strong)
        throw TheoremViolation("cancellative_strong_mismatch",
                               "component annihilator test disagrees with the strong flag");
    return cancellative;
}

// --------------------------------------------------------------------------
// subgroups of the grade group

GradedSubgroup whole_grade_group(const GradedRing& S) {
    GradedSubgroup H;
    if (S.group.finite())
        H.fin = whole_subgroup(S.group.group());
    else
        H.whole_lattice = true;
    return H;
}

GradedSubgroup from_finite_subgroup(Subgroup H) {
    GradedSubgroup out;
    out.fin = std::move(H);
    return out;
}

GradedSubgroup from_lattice_gens(std::vector<Deg> gens) {
    GradedSubgroup out;
    out.lattice_gens = std::move(gens);
    return out;
}

namespace {

// membership in the sublattice spanned by gens, by integer row echelon.
// Pivot rows have zeros left of their pivot column, so reducing the target
// column by column settles membership.
bool lattice_member(const std::vector<Deg>& gens, Deg x) {
    const size_t dim = x.size();
    std::map<size_t, Deg> pivots;  // pivot column -> row
    for (const Deg& g : gens) {
        Deg v = g;
        for (;;) {
            size_t c = 0;
            while (c < dim && v[c] == 0) ++c;
            if (c == dim) break;
            auto it = pivots.find(c);
            if (it == pivots.end()) {
                if (v[c] < 0)
                    for (auto& e : v) e = -e;
                pivots.emplace(c, std::move(v));
                break;
            }
            // Euclid on the pivot column; the surviving row keeps the gcd
            Deg& p = it->second;
            while (v[c] != 0) {
                int64_t q = p[c] / v[c];
                for (size_t i = 0; i < dim; ++i) p[i] -= q * v[i];
                std::swap(p, v);
            }
            if (p[c] < 0)
                for (auto& e : p) e = -e;
        }
    }
    for (auto& [c, p] : pivots) {
        if (x[c] % p[c] != 0) return false;
        int64_t q = x[c] / p[c];
        for (size_t i = 0; i < dim; ++i) x[i] -= q * p[i];
    }
    for (int64_t v : x)
        if (v != 0) return false;
    return true;
}

}  // namespace

bool grade_subgroup_contains(const GradeGroup& G, const GradedSubgroup& H, const Deg& x) {
    if (G.finite()) {
        if (!H.fin) throw InputError("bad_subgroup", "finite grade group needs a subgroup");
        return H.fin->in[static_cast<uint32_t>(x[0])];
    }
    if (H.whole_lattice) return true;
    return lattice_member(H.lattice_gens, x);
}

bool grade_subgroup_contains(const GradedRing& S, const GradedSubgroup& H, const Deg& x) {
    return grade_subgroup_contains(S.group, H, x);
}

std::vector<Deg> conjugator_degrees(const GradedRing& S, const GradedSubgroup& H) {
    std::vector<Deg> out;
    for (const Deg& x : S.support()) {
        if (!S.in_support(S.group.inv(x))) continue;  // conjugate is zero anyway
        if (grade_subgroup_contains(S, H, x)) out.push_back(x);
    }
    return out;
}

// --------------------------------------------------------------------------
// ideals of S_e and invariance

std::vector<uint32_t> principal_block(const GradedRing& S) {
    const auto* b = S.block(S.e());
    return b ? *b : std::vector<uint32_t>{};
}

Submodule ideal_in_block(const FiniteRing& R, const std::vector<uint32_t>& block,
                         const Mat& gens) {
    Mat out;
    for (const Vec& g : gens) {
        out.push_back(g);
        for (uint32_t u : block) {
            Vec ug = R.mul_basis_left(u, g);
            out.push_back(R.mul_basis_right(g, u));
            for (uint32_t v : block) out.push_back(R.mul_basis_right(ug, v));
            out.push_back(std::move(ug));
        }
    }
    return span_submodule(R.modulus, R.rank, std::move(out));
}

Submodule conjugate_ideal(const GradedRing& S, const Submodule& I, const Deg& x) {
    const auto* bl = S.block(S.group.inv(x));
    const auto* br = S.block(x);
    Mat gens;
    if (bl && br)
        for (const Vec& g : I.rows)
            for (uint32_t u : *bl)
                for (uint32_t v : *br)
                    gens.push_back(S.ring.mul_basis_right(S.ring.mul_basis_left(u, g), v));
    return span_submodule(S.ring.modulus, S.ring.rank, std::move(gens));
}

bool is_invariant(const GradedRing& S, const Submodule& I, const GradedSubgroup& H) {
    for (const Deg& x : conjugator_degrees(S, H))
        if (!conjugate_ideal(S, I, x).subset_of(I)) return false;
    return true;
}

namespace {

// span(S_{h^-1 N} I S_{h N}) for the coset of h
Submodule coset_conjugate(const GradedRing& S, const Submodule& I, uint32_t h,
                          const Subgroup& N) {
    const FiniteGroup& G = S.group.group();
    Mat gens;
    for (uint32_t n1 : N.elems) {
        const auto* bl = S.block(Deg{static_cast<int64_t>(G.mul(G.inv(h), n1))});
        if (!bl) continue;
        for (uint32_t n2 : N.elems) {
            const auto* br = S.block(Deg{static_cast<int64_t>(G.mul(h, n2))});
            if (!br) continue;
            for (const Vec& g : I.rows)
                for (uint32_t u : *bl)
                    for (uint32_t v : *br)
                        gens.push_back(S.ring.mul_basis_right(S.ring.mul_basis_left(u, g), v));
        }
    }
    return span_submodule(S.ring.modulus, S.ring.rank, std::move(gens));
}

std::vector<uint32_t> coset_reps(const FiniteGroup& G, const Subgroup& H,
                                 const Subgroup& N) {
    std::vector<bool> seen(G.order, false);
    std::vector<uint32_t> reps;
    for (uint32_t h : H.elems) {
        if (seen[h]) continue;
        reps.push_back(h);
        for (uint32_t n : N.elems) seen[G.mul(h, n)] = true;
    }
    return reps;
}

}  // namespace

bool is_coset_invariant(const GradedRing& S, const Submodule& I, const GradedSubgroup& H,
                        const GradedSubgroup& N) {
    if (!S.group.finite() || !H.fin || !N.fin)
        throw InputError("finite_grade_group_required",
                         "coset invariance is only defined over finite grade groups");
    for (uint32_t h : coset_reps(S.group.group(), *H.fin, *N.fin))
        if (!coset_conjugate(S, I, h, *N.fin).subset_of(I)) return false;
    return true;
}

bool is_epsilon_invariant(const GradedRing& S, const Submodule& I) {
    for (const Deg& x : S.support()) {
        Submodule w = component_product(S, x, S.group.inv(x));
        Mat left, right;
        for (const Vec& r : w.rows)
            for (const Vec& g : I.rows) {
                left.push_back(S.ring.mul(r, g));
                right.push_back(S.ring.mul(g, r));
            }
        if (!(span_submodule(S.ring.modulus, S.ring.rank, std::move(left)) ==
              span_submodule(S.ring.modulus, S.ring.rank, std::move(right))))
            return false;
    }
    return true;
}

Submodule invariant_closure_in_block(const GradedRing& S,
                                     const std::vector<uint32_t>& block,
                                     const Submodule& I, const GradedSubgroup& H) {
    std::vector<Deg> conj = conjugator_degrees(S, H);
    Submodule J = ideal_in_block(S.ring, block, I.rows);
    for (;;) {
        Mat gens = J.rows;
        for (const Deg& x : conj) {
            Submodule c = conjugate_ideal(S, J, x);
            gens.insert(gens.end(), c.rows.begin(), c.rows.end());
        }
        Submodule next = ideal_in_block(S.ring, block, gens);
        if (next == J) return J;
        J = std::move(next);
    }
}

Submodule invariant_closure(const GradedRing& S, const Submodule& I,
                            const GradedSubgroup& H) {
    return invariant_closure_in_block(S, principal_block(S), I, H);
}

Submodule coset_invariant_closure_in_block(const GradedRing& S,
                                           const std::vector<uint32_t>& block,
                                           const Submodule& I, const GradedSubgroup& H,
                                           const GradedSubgroup& N) {
    if (!S.group.finite() || !H.fin || !N.fin)
        throw InputError("finite_grade_group_required",
                         "coset invariance is only defined over finite grade groups");
    std::vector<uint32_t> reps = coset_reps(S.group.group(), *H.fin, *N.fin);
    Submodule J = ideal_in_block(S.ring, block, I.rows);
    for (;;) {
        Mat gens = J.rows;
        for (uint32_t h : reps) {
            Submodule c = coset_conjugate(S, J, h, *N.fin);
            gens.insert(gens.end(), c.rows.begin(), c.rows.end());
        }
        Submodule next = ideal_in_block(S.ring, block, gens);
        if (next == J) return J;
        J = std::move(next);
    }
}

// --------------------------------------------------------------------------
// primeness relative to the grading

namespace {

struct ClosureScan {
    std::vector<Vec> reps;          // first generator reaching each closure
    std::vector<Submodule> ideals;  // distinct nonzero ideals, scan order
};

// distinct invariant closures of principal ideals of prime-torsion
// generators, keyed by first appearance
ClosureScan scan_invariant_closures(const GradedRing& S, const Caps& caps,
                                    uint64_t& scanned) {
    ClosureScan out;
    std::set<Mat> seen;
    GradedSubgroup whole = whole_grade_group(S);
    std::vector<uint32_t> block = principal_block(S);
    for_each_block_socle(S, block, caps, [&](const Vec& a) {
        ++scanned;
        Submodule cl = invariant_closure(S, span_submodule(S.ring.modulus, S.ring.rank, {a}),
                                         whole);
        if (!cl.is_zero() && seen.insert(cl.rows).second) {
            out.reps.push_back(a);
            out.ideals.push_back(std::move(cl));
        }
        return true;
    });
    return out;
}

ClosureScan scan_graded_principals(const GradedRing& S, const Caps& caps,
                                   uint64_t& scanned) {
    ClosureScan out;
    std::set<Mat> seen;
    for (const Deg& x : S.support()) {
        for_each_block_socle(S, *S.block(x), caps, [&](const Vec& a) {
            ++scanned;
            Submodule id = ideal_from_gens(S.ring, {a});
            if (!id.is_zero() && seen.insert(id.rows).second) {
                out.reps.push_back(a);
                out.ideals.push_back(std::move(id));
            }
            return true;
        });
    }
    return out;
}

GPrimeReport pair_scan(const FiniteRing& R, const ClosureScan& scan, bool diagonal_only,
                       uint64_t scanned) {
    GPrimeReport rep;
    rep.holds = true;
    rep.scanned = scanned;
    for (size_t i = 0; i < scan.ideals.size(); ++i) {
        for (size_t j = 0; j < scan.ideals.size(); ++j) {
            if (diagonal_only && i != j) continue;
            if (submodule_product(R, scan.ideals[i], scan.ideals[j]).is_zero()) {
                rep.holds = false;
                rep.witness_a = scan.reps[i];
                rep.witness_b = scan.reps[j];
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace

GPrimeReport is_G_prime(const GradedRing& S, const Caps& caps) {
    uint64_t scanned = 0;
    ClosureScan scan = scan_invariant_closures(S, caps, scanned);
    return pair_scan(S.ring, scan, false, scanned);
}

GPrimeReport is_G_semiprime(const GradedRing& S, const Caps& caps) {
    uint64_t scanned = 0;
    ClosureScan scan = scan_invariant_closures(S, caps, scanned);
    return pair_scan(S.ring, scan, true, scanned);
}

GPrimeReport is_graded_prime(const GradedRing& S, const Caps& caps) {
    uint64_t scanned = 0;
    ClosureScan scan = scan_graded_principals(S, caps, scanned);
    return pair_scan(S.ring, scan, false, scanned);
}

// --------------------------------------------------------------------------
// induced structures

SubringGraded subring_graded(const GradedRing& S, const GradedSubgroup& H) {
    SubringGraded out;
    std::vector<Deg> sub_degs;

    if (S.group.finite()) {
        if (!H.fin) throw InputError("bad_subgroup", "finite grade group needs a subgroup");
        const FiniteGroup& G = S.group.group();
        const Subgroup& Hs = *H.fin;
        for (uint32_t h : Hs.elems) {
            const auto* b = S.block(Deg{static_cast<int64_t>(h)});
            if (!b) continue;
            for (uint32_t i : *b) out.to_parent.push_back(i);
        }
        // H reindexed as its own group
        std::vector<uint32_t> pos(G.order, 0);
        for (uint32_t k = 0; k < Hs.elems.size(); ++k) pos[Hs.elems[k]] = k;
        const uint32_t n = static_cast<uint32_t>(Hs.elems.size());
        std::vector<std::vector<uint32_t>> table(n, std::vector<uint32_t>(n));
        std::vector<std::string> labels(n);
        for (uint32_t a = 0; a < n; ++a) {
            labels[a] = G.labels[Hs.elems[a]];
            for (uint32_t b = 0; b < n; ++b)
                table[a][b] = pos[G.mul(Hs.elems[a], Hs.elems[b])];
        }
        FiniteGroup Hgrp = make_group(table, labels);
        for (uint32_t i : out.to_parent)
            sub_degs.push_back(
                Deg{static_cast<int64_t>(pos[static_cast<uint32_t>(S.degrees[i][0])])});
        out.sub.group = finite_grade_group(std::move(Hgrp));
    } else {
        for (uint32_t i = 0; i < S.ring.rank; ++i)
            if (grade_subgroup_contains(S, H, S.degrees[i])) out.to_parent.push_back(i);
        for (uint32_t i : out.to_parent) sub_degs.push_back(S.degrees[i]);
        out.sub.group = S.group;
    }

    const uint32_t k = static_cast<uint32_t>(out.to_parent.size());
    if (k == 0)
        throw InputError("empty_subring", "no basis vector has degree in the subgroup");
    std::vector<uint32_t> sub_pos(S.ring.rank, UINT32_MAX);
    for (uint32_t i = 0; i < k; ++i) sub_pos[out.to_parent[i]] = i;

    std::vector<Vec> table(static_cast<size_t>(k) * k, Vec(k, 0));
    for (uint32_t i = 0; i < k; ++i)
        for (uint32_t j = 0; j < k; ++j) {
            const uint32_t pi = out.to_parent[i], pj = out.to_parent[j];
            for (uint32_t t : S.ring.support[pi * S.ring.rank + pj]) {
                if (sub_pos[t] == UINT32_MAX)
                    throw TheoremViolation("subring_closure",
                                           "product left the subgroup blocks");
                table[i * k + j][sub_pos[t]] = S.ring.basis_product(pi, pj)[t];
            }
        }
    std::vector<std::string> labels(k);
    for (uint32_t i = 0; i < k; ++i) labels[i] = S.ring.labels[out.to_parent[i]];

    std::optional<Vec> unit;
    if (S.ring.unit) {
        // the identity of a graded ring is homogeneous of identity degree,
        // so its truncation is the identity of any S_H
        Vec cand(k, 0);
        for (uint32_t i = 0; i < k; ++i) cand[i] = (*S.ring.unit)[out.to_parent[i]];
        FiniteRing probe = make_ring(S.ring.modulus, k, table, labels);
        bool ok = true;
        for (uint32_t i = 0; i < k && ok; ++i) {
            Vec b = probe.basis(i);
            if (probe.mul(cand, b) != b || probe.mul(b, cand) != b) ok = false;
        }
        if (!ok)
            throw TheoremViolation("unit_not_homogeneous",
                                   "truncated identity is not an identity of the subring");
        unit = std::move(cand);
    }
    FiniteRing sub_ring = make_ring(S.ring.modulus, k, std::move(table), std::move(labels),
                                    std::move(unit));
    out.sub = make_graded_ring(std::move(sub_ring), std::move(out.sub.group),
                              std::move(sub_degs));
    return out;
}

Vec pi_truncate(const GradedRing& S, const GradedSubgroup& H, const Vec& v) {
    Vec out(v.size(), 0);
    for (uint32_t i = 0; i < S.ring.rank; ++i)
        if (grade_subgroup_contains(S, H, S.degrees[i])) out[i] = v[i];
    return out;
}

Submodule pi_truncate_submodule(const GradedRing& S, const GradedSubgroup& H,
                                const Submodule& M) {
    Mat gens;
    for (const Vec& r : M.rows) gens.push_back(pi_truncate(S, H, r));
    return span_submodule(M.modulus, M.ncols, std::move(gens));
}

namespace {

// diagonalize an integer matrix by row and column operations, tracking the
// row transform; enough to present Z^r / colspan as a product of cyclics
struct IntDiag {
    std::vector<std::vector<int64_t>> U;  // r x r unimodular
    std::vector<int64_t> diag;            // length r, zeros mean infinite
};

IntDiag diagonalize(std::vector<std::vector<int64_t>> A, size_t r) {
    IntDiag out;
    out.U.assign(r, std::vector<int64_t>(r, 0));
    for (size_t i = 0; i < r; ++i) out.U[i][i] = 1;
    const size_t s = A.empty() ? 0 : A[0].size();
    size_t t = 0;
    while (t < r && t < s) {
        // find a nonzero pivot in the remaining block
        size_t pi = r, pj = s;
        for (size_t i = t; i < r; ++i)
            for (size_t j = t; j < s; ++j)
                if (A[i][j] != 0 && (pi == r || std::abs(A[i][j]) < std::abs(A[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == r) break;
        std::swap(A[t], A[pi]);
        std::swap(out.U[t], out.U[pi]);
        for (auto& row : A) std::swap(row[t], row[pj]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = t + 1; i < r; ++i) {
                if (A[i][t] == 0) continue;
                int64_t q = A[i][t] / A[t][t];
                for (size_t j = 0; j < s; ++j) A[i][j] -= q * A[t][j];
                for (size_t j = 0; j < r; ++j) out.U[i][j] -= q * out.U[t][j];
                if (A[i][t] != 0) {  // remainder smaller than pivot: swap up
                    std::swap(A[t], A[i]);
                    std::swap(out.U[t], out.U[i]);
                    clean = false;
                }
            }
            for (size_t j = t + 1; j < s; ++j) {
                if (A[t][j] == 0) continue;
                int64_t q = A[t][j] / A[t][t];
                for (size_t i = 0; i < r; ++i) A[i][j] -= q * A[i][t];
                if (A[t][j] != 0) {
                    for (size_t i = 0; i < r; ++i) std::swap(A[i][t], A[i][j]);
                    clean = false;
                }
            }
        }
        ++t;
    }
    out.diag.assign(r, 0);
    for (size_t i = 0; i < r && i < s; ++i) out.diag[i] = std::abs(A[i][i]);
    return out;
}

}  // namespace

GradedRing induced_quotient_grading(const GradedRing& S, const GradedSubgroup& N) {
    if (S.group.finite()) {
        if (!N.fin) throw InputError("bad_subgroup", "finite grade group needs a subgroup");
        const FiniteGroup& G = S.group.group();
        if (!is_normal(G, *N.fin, whole_subgroup(G)))
            throw InputError("normal_subgroup_required",
                             "quotient grading needs a normal subgroup");
        QuotientGroup q = quotient_group(G, *N.fin);
        std::vector<Deg> degs;
        for (const Deg& d : S.degrees)
            degs.push_back(Deg{static_cast<int64_t>(q.projection[static_cast<uint32_t>(d[0])])});
        return make_graded_ring(S.ring, finite_grade_group(q.group), std::move(degs));
    }

    const size_t r = S.group.lattice_rank();
    if (!N.whole_lattice && N.lattice_gens.empty()) return S;  // quotient by zero
    std::vector<std::vector<int64_t>> cols(r);
    std::vector<Deg> gens = N.lattice_gens;
    if (N.whole_lattice) {
        gens.clear();
        for (size_t i = 0; i < r; ++i) {
            Deg e(r, 0);
            e[i] = 1;
            gens.push_back(e);
        }
    }
    for (size_t i = 0; i < r; ++i) {
        cols[i].resize(gens.size());
        for (size_t j = 0; j < gens.size(); ++j) cols[i][j] = gens[j][i];
    }
    IntDiag d = diagonalize(cols, r);
    uint64_t order = 1;
    for (size_t i = 0; i < r; ++i) {
        if (d.diag[i] == 0)
            throw InputError("finite_quotient_required",
                             "sublattice is not of full rank");
        order *= static_cast<uint64_t>(d.diag[i]);
    }
    Caps caps;
    if (order > caps.max_group_order)
        throw CapExceeded("quotient_order", "quotient group exceeds max_group_order");

    // quotient group as tuples (t_0,...,t_{r-1}) with t_i mod diag[i]
    const uint32_t n = static_cast<uint32_t>(order);
    std::vector<uint64_t> stride(r, 1);
    for (size_t i = 1; i < r; ++i)
        stride[i] = stride[i - 1] * static_cast<uint64_t>(d.diag[i - 1]);
    auto decode = [&](uint32_t idx) {
        std::vector<int64_t> t(r);
        uint64_t v = idx;
        for (size_t i = 0; i < r; ++i) {
            t[i] = static_cast<int64_t>(v % static_cast<uint64_t>(d.diag[i]));
            v /= static_cast<uint64_t>(d.diag[i]);
        }
        return t;
    };
    std::vector<std::vector<uint32_t>> table(n, std::vector<uint32_t>(n));
    std::vector<std::string> labels(n);
    for (uint32_t a = 0; a < n; ++a) {
        auto ta = decode(a);
        std::ostringstream os;
        os << '(';
        for (size_t i = 0; i < r; ++i) os << (i ? "," : "") << ta[i];
        os << ')';
        labels[a] = os.str();
        for (uint32_t b = 0; b < n; ++b) {
            auto tb = decode(b);
            uint64_t idx = 0;
            for (size_t i = 0; i < r; ++i)
                idx += stride[i] *
                       (static_cast<uint64_t>((ta[i] + tb[i]) % d.diag[i]));
            table[a][b] = static_cast<uint32_t>(idx);
        }
    }
    FiniteGroup Q = make_group(table, labels);
    auto project = [&](const Deg& x) {
        uint64_t idx = 0;
        for (size_t i = 0; i < r; ++i) {
            int64_t v = 0;
            for (size_t j = 0; j < r; ++j) v += d.U[i][j] * x[j];
            int64_t t = ((v % d.diag[i]) + d.diag[i]) % d.diag[i];
            idx += stride[i] * static_cast<uint64_t>(t);
        }
        return Deg{static_cast<int64_t>(idx)};
    };
    std::vector<Deg> degs;
    for (const Deg& x : S.degrees) degs.push_back(project(x));
    return make_graded_ring(S.ring, finite_grade_group(std::move(Q)), std::move(degs));
}

// --------------------------------------------------------------------------
// graded ideal lattice and the correspondence

namespace {

std::vector<Submodule> join_closure(const FiniteRing& R, std::vector<Submodule> gens,
                                    const Caps& caps, const char* cap_what) {
    std::map<Mat, size_t> seen;
    std::vector<Submodule> out;
    out.push_back(zero_submodule(R.modulus, R.rank));
    seen.emplace(out[0].rows, 0);
    auto add = [&](Submodule s) {
        if (seen.count(s.rows)) return false;
        if (out.size() + 1 > caps.max_ideals)
            throw CapExceeded(cap_what, "ideal lattice exceeds max_ideals");
        seen.emplace(s.rows, out.size());
        out.push_back(std::move(s));
        return true;
    };
    for (Submodule& g : gens) add(std::move(g));
    for (size_t i = 1; i < out.size(); ++i)
        for (size_t j = 1; j < i; ++j) add(submodule_sum(out[i], out[j]));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Submodule> enumerate_graded_ideals(const GradedRing& S, const Caps& caps) {
    std::vector<Submodule> principals;
    std::set<Mat> seen;
    for (const Deg& x : S.support()) {
        check_component_cap(S, *S.block(x), caps);
        for_each_block_element(S, *S.block(x), [&](const Vec& v) {
            Submodule id = ideal_from_gens(S.ring, {v});
            if (seen.insert(id.rows).second) principals.push_back(std::move(id));
            return true;
        });
    }
    return join_closure(S.ring, std::move(principals), caps, "graded_ideal_lattice");
}

std::vector<Submodule> enumerate_block_ideals(const FiniteRing& R,
                                              const std::vector<uint32_t>& block,
                                              const Caps& caps) {
    uint64_t n = 1;
    for (size_t i = 0; i < block.size(); ++i) {
        n *= R.modulus;
        if (n > caps.max_elements)
            throw CapExceeded("component_enumeration",
                              "subring has more than max_elements elements");
    }
    Mat basis;
    for (uint32_t i : block) basis.push_back(R.basis(i));
    Submodule span = span_submodule(R.modulus, R.rank, basis);
    std::vector<Submodule> principals;
    std::set<Mat> seen;
    for_each_submodule_element(span, [&](const Vec& v) {
        if (zmod::is_zero_vec(v)) return true;
        Submodule id = ideal_in_block(R, block, {v});
        if (seen.insert(id.rows).second) principals.push_back(std::move(id));
        return true;
    });
    return join_closure(R, std::move(principals), caps, "subring_ideal_lattice");
}

namespace {

Submodule extend_to_graded(const GradedRing& S, const Submodule& J) {
    // S J S; for an s-unital ring this contains J
    Mat gens;
    for (const Vec& g : J.rows)
        for (uint32_t u = 0; u < S.ring.rank; ++u)
            for (uint32_t v = 0; v < S.ring.rank; ++v)
                gens.push_back(S.ring.mul_basis_right(S.ring.mul_basis_left(u, g), v));
    return span_submodule(S.ring.modulus, S.ring.rank, std::move(gens));
}

std::vector<bool> prime_members(const FiniteRing& R, const std::vector<Submodule>& L,
                                const Submodule& full) {
    const size_t n = L.size();
    std::vector<std::vector<Submodule>> prod(n);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) prod[a].push_back(submodule_product(R, L[a], L[b]));
    std::vector<bool> is_pr(n, false);
    for (size_t p = 0; p < n; ++p) {
        if (L[p] == full) continue;  // prime ideals are proper
        bool prime = true;
        for (size_t a = 0; a < n && prime; ++a) {
            if (L[a].subset_of(L[p])) continue;
            for (size_t b = 0; b < n && prime; ++b)
                if (prod[a][b].subset_of(L[p]) && !L[b].subset_of(L[p])) prime = false;
        }
        is_pr[p] = prime;
    }
    return is_pr;
}

}  // namespace

CorrespondenceReport graded_ideal_correspondence(const GradedRing& S, const Caps& caps) {
    GradingFlags flags = classify_grading(S, caps);
    if (!flags.nearly_epsilon_strong)
        throw InputError("nearly_epsilon_strong_required",
                         "ideal correspondence assumes a nearly epsilon-strong grading");

    std::vector<uint32_t> eblock = principal_block(S);
    std::vector<Submodule> Lgr = enumerate_graded_ideals(S, caps);
    std::vector<Submodule> Linv;
    GradedSubgroup whole = whole_grade_group(S);
    for (Submodule& J : enumerate_block_ideals(S.ring, eblock, caps))
        if (is_invariant(S, J, whole)) Linv.push_back(std::move(J));

    CorrespondenceReport rep;
    rep.graded_ideals = Lgr.size();
    rep.invariant_ideals = Linv.size();
    if (Lgr.size() != Linv.size())
        throw CorrespondenceViolation("correspondence_count",
                                      "graded and invariant ideal counts differ");

    std::set<Mat> inv_set, gr_set;
    for (const Submodule& J : Linv) inv_set.insert(J.rows);
    for (const Submodule& I : Lgr) gr_set.insert(I.rows);

    Submodule Se = S.component(S.e());
    auto restrict_ideal = [&](const Submodule& I) { return submodule_intersect(I, Se); };

    std::map<Mat, Mat> rho;  // graded -> invariant, for the prime matching
    for (const Submodule& I : Lgr) {
        Submodule J = restrict_ideal(I);
        if (!inv_set.count(J.rows))
            throw CorrespondenceViolation("correspondence_restriction",
                                          "restriction of a graded ideal is not invariant");
        if (!(extend_to_graded(S, J) == I))
            throw CorrespondenceViolation("correspondence_roundtrip",
                                          "extending the restriction does not return the ideal");
        rho.emplace(I.rows, J.rows);
    }
    for (const Submodule& J : Linv) {
        Submodule I = extend_to_graded(S, J);
        if (!gr_set.count(I.rows))
            throw CorrespondenceViolation("correspondence_extension",
                                          "extension of an invariant ideal is not graded");
        if (!(restrict_ideal(I) == J))
            throw CorrespondenceViolation("correspondence_roundtrip",
                                          "restricting the extension does not return the ideal");
    }

    if (Lgr.size() > 128)
        throw CapExceeded("prime_ideal_classification",
                          "too many ideals for the prime matching pass");
    std::vector<bool> gr_prime =
        prime_members(S.ring, Lgr, full_submodule(S.ring.modulus, S.ring.rank));
    std::vector<bool> inv_prime = prime_members(S.ring, Linv, Se);
    std::map<Mat, bool> inv_prime_of;
    for (size_t i = 0; i < Linv.size(); ++i) inv_prime_of[Linv[i].rows] = inv_prime[i];
    uint64_t ng = 0, ni = 0;
    for (bool b : gr_prime) ng += b;
    for (bool b : inv_prime) ni += b;
    rep.graded_prime_ideals = ng;
    rep.g_prime_ideals = ni;
    if (ng != ni)
        throw CorrespondenceViolation("correspondence_prime_count",
                                      "graded-prime and invariant-prime counts differ");
    for (size_t i = 0; i < Lgr.size(); ++i)
        if (gr_prime[i] != inv_prime_of.at(rho.at(Lgr[i].rows)))
            throw CorrespondenceViolation("correspondence_prime_match",
                                          "restriction does not preserve primeness");
    return rep;
}

}  // namespace gplab
