#include "gplab/groups.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace gplab {

FiniteGroup make_group(std::vector<std::vector<uint32_t>> table,
                       std::vector<std::string> labels) {
    FiniteGroup G;
    G.order = static_cast<uint32_t>(table.size());
    if (G.order == 0) throw InputError("empty_group", "group table has no rows");
    for (const auto& row : table)
        if (row.size() != G.order)
            throw InputError("ragged_table", "group table is not square");
    for (uint32_t g = 0; g < G.order; ++g)
        for (uint32_t h = 0; h < G.order; ++h)
            if (table[g][h] >= G.order)
                throw InputError("table_range", "group table entry out of range");
    // Latin square: each row and column a permutation
    for (uint32_t g = 0; g < G.order; ++g) {
        std::vector<bool> row_seen(G.order, false), col_seen(G.order, false);
        for (uint32_t h = 0; h < G.order; ++h) {
            if (row_seen[table[g][h]] || col_seen[table[h][g]])
                throw InputError("not_cancellative", "group table row/column repeats");
            row_seen[table[g][h]] = col_seen[table[h][g]] = true;
        }
    }
    for (uint32_t a = 0; a < G.order; ++a)
        for (uint32_t b = 0; b < G.order; ++b)
            for (uint32_t c = 0; c < G.order; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw InputError("not_associative", "group table fails associativity");
    std::optional<uint32_t> id;
    for (uint32_t e = 0; e < G.order; ++e) {
        bool ok = true;
        for (uint32_t g = 0; g < G.order; ++g)
            if (table[e][g] != g || table[g][e] != g) {
                ok = false;
                break;
            }
        if (ok) {
            id = e;
            break;
        }
    }
    if (!id) throw InputError("no_identity", "group table has no identity");
    G.identity = *id;
    G.inverse.assign(G.order, 0);
    for (uint32_t g = 0; g < G.order; ++g) {
        bool found = false;
        for (uint32_t h = 0; h < G.order; ++h)
            if (table[g][h] == G.identity && table[h][g] == G.identity) {
                G.inverse[g] = h;
                found = true;
                break;
            }
        if (!found) throw InputError("no_inverse", "group element lacks an inverse");
    }
    G.table = std::move(table);
    if (labels.empty()) {
        for (uint32_t g = 0; g < G.order; ++g) labels.push_back("g" + std::to_string(g));
    } else if (labels.size() != G.order) {
        throw InputError("label_count", "label count differs from group order");
    }
    G.labels = std::move(labels);
    return G;
}

FiniteGroup cyclic_group(uint32_t n) {
    if (n == 0) throw InputError("empty_group", "cyclic group of order 0");
    std::vector<std::vector<uint32_t>> t(n, std::vector<uint32_t>(n));
    for (uint32_t a = 0; a < n; ++a)
        for (uint32_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    std::vector<std::string> labels;
    for (uint32_t a = 0; a < n; ++a) labels.push_back("r" + std::to_string(a));
    return make_group(std::move(t), std::move(labels));
}

FiniteGroup product_group(const FiniteGroup& a, const FiniteGroup& b) {
    uint32_t n = a.order * b.order;
    auto idx = [&](uint32_t x, uint32_t y) { return x * b.order + y; };
    std::vector<std::vector<uint32_t>> t(n, std::vector<uint32_t>(n));
    std::vector<std::string> labels(n);
    for (uint32_t x1 = 0; x1 < a.order; ++x1)
        for (uint32_t y1 = 0; y1 < b.order; ++y1) {
            labels[idx(x1, y1)] = "(" + a.labels[x1] + "," + b.labels[y1] + ")";
            for (uint32_t x2 = 0; x2 < a.order; ++x2)
                for (uint32_t y2 = 0; y2 < b.order; ++y2)
                    t[idx(x1, y1)][idx(x2, y2)] = idx(a.mul(x1, x2), b.mul(y1, y2));
        }
    return make_group(std::move(t), std::move(labels));
}

Subgroup subgroup_from(const FiniteGroup& G, std::vector<uint32_t> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    Subgroup H;
    H.in.assign(G.order, false);
    for (uint32_t g : elems) {
        if (g >= G.order) throw InputError("bad_subgroup", "element out of range");
        H.in[g] = true;
    }
    if (!H.in[G.identity]) throw InputError("bad_subgroup", "missing identity");
    for (uint32_t g : elems) {
        if (!H.in[G.inv(g)]) throw InputError("bad_subgroup", "not closed under inverse");
        for (uint32_t h : elems)
            if (!H.in[G.mul(g, h)])
                throw InputError("bad_subgroup", "not closed under multiplication");
    }
    H.elems = std::move(elems);
    return H;
}

Subgroup closure_subgroup(const FiniteGroup& G, const std::vector<uint32_t>& gens) {
    std::vector<bool> in(G.order, false);
    std::vector<uint32_t> work{G.identity};
    in[G.identity] = true;
    for (uint32_t g : gens)
        if (!in[g]) {
            in[g] = true;
            work.push_back(g);
        }
    // breadth-first closure under products; inverses follow in a finite group
    for (size_t i = 0; i < work.size(); ++i)
        for (size_t j = 0; j < work.size(); ++j) {
            uint32_t p = G.mul(work[i], work[j]);
            if (!in[p]) {
                in[p] = true;
                work.push_back(p);
            }
            uint32_t q = G.mul(work[j], work[i]);
            if (!in[q]) {
                in[q] = true;
                work.push_back(q);
            }
        }
    std::vector<uint32_t> elems;
    for (uint32_t g = 0; g < G.order; ++g)
        if (in[g]) elems.push_back(g);
    return subgroup_from(G, std::move(elems));
}

Subgroup whole_subgroup(const FiniteGroup& G) {
    std::vector<uint32_t> all(G.order);
    for (uint32_t g = 0; g < G.order; ++g) all[g] = g;
    return subgroup_from(G, std::move(all));
}

Subgroup trivial_subgroup(const FiniteGroup& G) {
    return subgroup_from(G, {G.identity});
}

std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& G, const Caps& caps) {
    if (G.order > caps.max_group_order)
        throw CapExceeded("group_order",
                          "subgroup enumeration capped at order " +
                              std::to_string(caps.max_group_order));
    // grow each known subgroup by one extra generator and close
    std::set<std::vector<uint32_t>> seen;
    std::vector<Subgroup> out;
    std::vector<Subgroup> work{trivial_subgroup(G)};
    seen.insert(work[0].elems);
    for (size_t i = 0; i < work.size(); ++i) {
        Subgroup H = work[i];
        for (uint32_t g = 0; g < G.order; ++g) {
            if (H.contains(g)) continue;
            std::vector<uint32_t> gens = H.elems;
            gens.push_back(g);
            Subgroup K = closure_subgroup(G, gens);
            if (seen.insert(K.elems).second) work.push_back(std::move(K));
        }
    }
    out = std::move(work);
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.elems.size() != b.elems.size()) return a.elems.size() < b.elems.size();
        return a.elems < b.elems;
    });
    return out;
}

bool is_normal(const FiniteGroup& G, const Subgroup& N, const Subgroup& H) {
    for (uint32_t n : N.elems)
        if (!H.contains(n))
            throw InputError("bad_subgroup", "N is not contained in H");
    for (uint32_t h : H.elems)
        for (uint32_t n : N.elems)
            if (!N.contains(G.conj(h, n))) return false;
    return true;
}

std::vector<Subgroup> normal_subgroups_of(const FiniteGroup& G, const Subgroup& H,
                                          const Caps& caps) {
    auto subs = enumerate_subgroups(G, caps);
    std::vector<Subgroup> out;
    for (auto& N : subs) {
        bool inside = std::all_of(N.elems.begin(), N.elems.end(),
                                  [&](uint32_t n) { return H.contains(n); });
        if (inside && is_normal(G, N, H)) out.push_back(std::move(N));
    }
    return out;
}

QuotientGroup quotient_group(const FiniteGroup& G, const Subgroup& N) {
    if (!is_normal(G, N, whole_subgroup(G)))
        throw InputError("not_normal", "quotient by a non-normal subgroup");
    std::vector<uint32_t> proj(G.order, UINT32_MAX);
    std::vector<uint32_t> reps;
    for (uint32_t g = 0; g < G.order; ++g) {
        if (proj[g] != UINT32_MAX) continue;
        uint32_t c = static_cast<uint32_t>(reps.size());
        reps.push_back(g);  // g is the least element of its coset
        for (uint32_t n : N.elems) proj[G.mul(g, n)] = c;
    }
    uint32_t q = static_cast<uint32_t>(reps.size());
    std::vector<std::vector<uint32_t>> t(q, std::vector<uint32_t>(q));
    for (uint32_t a = 0; a < q; ++a)
        for (uint32_t b = 0; b < q; ++b) t[a][b] = proj[G.mul(reps[a], reps[b])];
    std::vector<std::string> labels;
    for (uint32_t a = 0; a < q; ++a) labels.push_back("[" + G.labels[reps[a]] + "]");
    QuotientGroup Q;
    Q.group = make_group(std::move(t), std::move(labels));
    Q.projection = std::move(proj);
    Q.coset_rep = std::move(reps);
    return Q;
}

Subgroup centralizer(const FiniteGroup& G, uint32_t g) {
    std::vector<uint32_t> elems;
    for (uint32_t x = 0; x < G.order; ++x)
        if (G.mul(x, g) == G.mul(g, x)) elems.push_back(x);
    return subgroup_from(G, std::move(elems));
}

Subgroup fc_center(const FiniteGroup& G) {
    // every conjugacy class of a finite group is finite
    std::vector<uint32_t> elems;
    for (uint32_t x = 0; x < G.order; ++x) {
        std::set<uint32_t> cls;
        for (uint32_t g = 0; g < G.order; ++g) cls.insert(G.conj(g, x));
        if (cls.size() <= G.order) elems.push_back(x);
    }
    return subgroup_from(G, std::move(elems));
}

Subgroup normal_closure(const FiniteGroup& G, const Subgroup& H,
                        const std::vector<uint32_t>& X) {
    for (uint32_t x : X)
        if (!H.contains(x)) throw InputError("bad_subgroup", "X not inside H");
    std::vector<uint32_t> gens = X;
    for (;;) {
        Subgroup K = closure_subgroup(G, gens);
        bool stable = true;
        std::vector<uint32_t> extra;
        for (uint32_t h : H.elems)
            for (uint32_t k : K.elems) {
                uint32_t c = G.conj(h, k);
                if (!K.contains(c)) {
                    extra.push_back(c);
                    stable = false;
                }
            }
        if (stable) return K;
        gens = K.elems;
        gens.insert(gens.end(), extra.begin(), extra.end());
    }
}

// --- symbolic -------------------------------------------------------------

namespace {

void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

uint32_t parse_uint(const std::string& s, size_t& i) {
    skip_ws(s, i);
    if (i >= s.size() || !isdigit(static_cast<unsigned char>(s[i])))
        throw InputError("group_expr", "expected integer in group expression");
    uint64_t v = 0;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) {
        v = v * 10 + (s[i] - '0');
        if (v > 1'000'000) throw InputError("group_expr", "integer too large");
        ++i;
    }
    return static_cast<uint32_t>(v);
}

SymbolicGroup parse_atom(const std::string& s, size_t& i) {
    skip_ws(s, i);
    if (i >= s.size()) throw InputError("group_expr", "unexpected end of expression");
    char c = s[i];
    if (c == '1') {
        ++i;
        return SymbolicGroup{SymTrivial{}};
    }
    if (c == 'Z') {
        ++i;
        skip_ws(s, i);
        uint32_t r = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            r = parse_uint(s, i);
            if (r == 0) return SymbolicGroup{SymTrivial{}};
        }
        return SymbolicGroup{SymIntegerLattice{r}};
    }
    if (c == 'C') {
        ++i;
        uint32_t n = parse_uint(s, i);
        if (n == 0) throw InputError("group_expr", "C0 is not a group");
        if (n == 1) return SymbolicGroup{SymTrivial{}};
        return SymbolicGroup{SymCyclic{n}};
    }
    if (c == 'F') {
        ++i;
        uint32_t k = parse_uint(s, i);
        if (k == 0) return SymbolicGroup{SymTrivial{}};
        if (k == 1) return SymbolicGroup{SymIntegerLattice{1}};  // free of rank 1 is Z
        return SymbolicGroup{SymFree{k}};
    }
    throw InputError("group_expr", std::string("unexpected character '") + c + "'");
}

}  // namespace

SymbolicGroup parse_symbolic_group(const std::string& expr) {
    size_t i = 0;
    std::vector<SymbolicGroup> factors;
    factors.push_back(parse_atom(expr, i));
    skip_ws(expr, i);
    while (i < expr.size()) {
        if (expr[i] != 'x')
            throw InputError("group_expr", "expected 'x' between factors");
        ++i;
        factors.push_back(parse_atom(expr, i));
        skip_ws(expr, i);
    }
    // drop trivial factors; a product of one thing is the thing
    std::vector<SymbolicGroup> kept;
    for (auto& f : factors)
        if (!std::holds_alternative<SymTrivial>(f.node)) kept.push_back(std::move(f));
    if (kept.empty()) return SymbolicGroup{SymTrivial{}};
    if (kept.size() == 1) return std::move(kept[0]);
    return SymbolicGroup{SymProduct{std::move(kept)}};
}

std::string symbolic_to_string(const SymbolicGroup& g) {
    struct V {
        std::string operator()(const SymTrivial&) const { return "1"; }
        std::string operator()(const SymCyclic& c) const {
            return "C" + std::to_string(c.n);
        }
        std::string operator()(const SymFiniteTable& t) const {
            return "table(" + std::to_string(t.group->order) + ")";
        }
        std::string operator()(const SymIntegerLattice& l) const {
            return l.rank == 1 ? "Z" : "Z^" + std::to_string(l.rank);
        }
        std::string operator()(const SymFree& f) const {
            return "F" + std::to_string(f.rank);
        }
        std::string operator()(const SymProduct& p) const {
            std::string s;
            for (size_t i = 0; i < p.factors.size(); ++i) {
                if (i) s += " x ";
                s += symbolic_to_string(p.factors[i]);
            }
            return s;
        }
    };
    return std::visit(V{}, g.node);
}

GroupPredicates symbolic_predicates(const SymbolicGroup& g) {
    struct V {
        GroupPredicates operator()(const SymTrivial&) const {
            return {true, true, false, true};
        }
        GroupPredicates operator()(const SymCyclic& c) const {
            // n >= 2 by construction
            (void)c;
            return {false, false, true, true};
        }
        GroupPredicates operator()(const SymFiniteTable& t) const {
            bool trivial = t.group->order == 1;
            return {trivial, trivial, !trivial, true};
        }
        GroupPredicates operator()(const SymIntegerLattice&) const {
            return {true, true, false, false};
        }
        GroupPredicates operator()(const SymFree&) const {
            return {true, true, false, false};
        }
        GroupPredicates operator()(const SymProduct& p) const {
            GroupPredicates acc{true, true, false, true};
            for (const auto& f : p.factors) {
                GroupPredicates q = symbolic_predicates(f);
                acc.is_torsion_free = acc.is_torsion_free && q.is_torsion_free;
                acc.is_ordered = acc.is_ordered && q.is_ordered;
                // a finite normal subgroup of a product projects to finite
                // normal subgroups of the factors, so the product has one
                // iff some factor does
                acc.has_nontrivial_finite_normal_subgroup =
                    acc.has_nontrivial_finite_normal_subgroup ||
                    q.has_nontrivial_finite_normal_subgroup;
                acc.is_finite = acc.is_finite && q.is_finite;
            }
            return acc;
        }
    };
    return std::visit(V{}, g.node);
}

FiniteGroup symbolic_to_table(const SymbolicGroup& g) {
    struct V {
        FiniteGroup operator()(const SymTrivial&) const { return cyclic_group(1); }
        FiniteGroup operator()(const SymCyclic& c) const { return cyclic_group(c.n); }
        FiniteGroup operator()(const SymFiniteTable& t) const { return *t.group; }
        FiniteGroup operator()(const SymIntegerLattice&) const {
            throw InputError("infinite_group", "no finite table for a lattice group");
        }
        FiniteGroup operator()(const SymFree&) const {
            throw InputError("infinite_group", "no finite table for a free group");
        }
        FiniteGroup operator()(const SymProduct& p) const {
            FiniteGroup acc = symbolic_to_table(p.factors[0]);
            for (size_t i = 1; i < p.factors.size(); ++i)
                acc = product_group(acc, symbolic_to_table(p.factors[i]));
            return acc;
        }
    };
    return std::visit(V{}, g.node);
}

}  // namespace gplab
