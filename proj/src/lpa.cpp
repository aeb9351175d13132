#include "gplab/lpa.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "gplab/errors.hpp"
#include "gplab/zmod.hpp"

namespace gplab {

namespace {

uint64_t pow_sat(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    while (e--) {
        if (r > UINT64_MAX / b) return UINT64_MAX;
        r *= b;
    }
    return r;
}

// acyclic iff a topological peel consumes every vertex
bool has_cycle(const DirectedGraph& E) {
    uint32_t n = E.n_vertices();
    std::vector<uint32_t> indeg(n, 0);
    for (const auto& e : E.edges) ++indeg[e.dst];
    std::vector<uint32_t> ready;
    for (uint32_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    uint32_t seen = 0;
    while (!ready.empty()) {
        uint32_t v = ready.back();
        ready.pop_back();
        ++seen;
        for (const auto& e : E.edges)
            if (e.src == v && --indeg[e.dst] == 0) ready.push_back(e.dst);
    }
    return seen != n;
}

// every path of the graph, ordered by length, then start, then edge word
std::vector<Path> all_paths(const DirectedGraph& E, size_t limit) {
    std::vector<Path> out;
    for (uint32_t v = 0; v < E.n_vertices(); ++v) out.push_back(Path{v, {}});
    size_t lo = 0;
    while (lo < out.size()) {
        size_t hi = out.size();
        for (size_t i = lo; i < hi; ++i) {
            Path p = out[i];
            uint32_t tail = path_range(E, p);
            for (uint32_t f : E.out_edges(tail)) {
                Path q = p;
                q.edges.push_back(f);
                out.push_back(std::move(q));
                if (out.size() > limit)
                    throw CapExceeded("ring_size", "path enumeration exceeds the element cap");
            }
        }
        lo = hi;
    }
    return out;
}

struct Cell {
    uint32_t block, i, j;  // block w, matrix position (i, j)
};

// basis offset of (block, i, j, coefficient l)
struct BlockLayout {
    std::vector<uint32_t> sizes;    // paths per block
    std::vector<uint32_t> offsets;  // ring-coordinate start of each block
    uint32_t k = 1;

    uint32_t at(const Cell& c, uint32_t l) const {
        return offsets[c.block] + (c.i * sizes[c.block] + c.j) * k + l;
    }
};

BlockLayout layout_of(const LpaRealization& L) {
    BlockLayout B;
    uint32_t cells = 0;
    for (const auto& ps : L.sink_paths)
        cells += static_cast<uint32_t>(ps.size() * ps.size());
    B.k = cells ? L.ring.ring.rank / cells : 1;
    uint32_t off = 0;
    for (const auto& ps : L.sink_paths) {
        B.sizes.push_back(static_cast<uint32_t>(ps.size()));
        B.offsets.push_back(off);
        off += static_cast<uint32_t>(ps.size() * ps.size()) * B.k;
    }
    return B;
}

std::vector<Cell> diagonal_cells_of_vertex(const LpaRealization& L, uint32_t v) {
    std::vector<Cell> out;
    for (uint32_t b = 0; b < L.sink_paths.size(); ++b)
        for (uint32_t i = 0; i < L.sink_paths[b].size(); ++i)
            if (path_source(L.graph, L.sink_paths[b][i]) == v) out.push_back({b, i, i});
    return out;
}

}  // namespace

bool DirectedGraph::is_infinite_emitter(uint32_t v) const {
    return std::find(infinite_emitters.begin(), infinite_emitters.end(), v) !=
           infinite_emitters.end();
}

std::vector<uint32_t> DirectedGraph::out_edges(uint32_t v) const {
    std::vector<uint32_t> out;
    for (uint32_t f = 0; f < edges.size(); ++f)
        if (edges[f].src == v) out.push_back(f);
    return out;
}

bool DirectedGraph::is_sink(uint32_t v) const {
    return out_edges(v).empty() && !is_infinite_emitter(v);
}

bool DirectedGraph::is_regular(uint32_t v) const {
    return !out_edges(v).empty() && !is_infinite_emitter(v);
}

DirectedGraph make_graph(std::vector<std::string> vertices,
                         std::vector<DirectedGraph::Edge> edges,
                         std::vector<uint32_t> infinite_emitters) {
    if (vertices.empty()) throw InputError("bad_graph", "at least one vertex required");
    std::set<std::string> names(vertices.begin(), vertices.end());
    if (names.size() != vertices.size())
        throw InputError("bad_graph", "vertex labels must be distinct");
    for (const auto& e : edges) {
        if (e.src >= vertices.size() || e.dst >= vertices.size())
            throw InputError("bad_graph", "edge " + e.name + " has an endpoint out of range");
        if (!names.insert(e.name).second)
            throw InputError("bad_graph", "label " + e.name + " is not unique");
    }
    std::sort(infinite_emitters.begin(), infinite_emitters.end());
    infinite_emitters.erase(
        std::unique(infinite_emitters.begin(), infinite_emitters.end()),
        infinite_emitters.end());
    for (uint32_t v : infinite_emitters)
        if (v >= vertices.size())
            throw InputError("bad_graph", "emitter flag out of range");
    DirectedGraph E;
    E.vertices = std::move(vertices);
    E.edges = std::move(edges);
    E.infinite_emitters = std::move(infinite_emitters);
    return E;
}

uint32_t path_source(const DirectedGraph& E, const Path& p) {
    if (p.base >= E.n_vertices()) throw InputError("bad_path", "base vertex out of range");
    return p.edges.empty() ? p.base : E.edges.at(p.edges.front()).src;
}

uint32_t path_range(const DirectedGraph& E, const Path& p) {
    if (p.base >= E.n_vertices()) throw InputError("bad_path", "base vertex out of range");
    uint32_t at = p.base;
    for (uint32_t f : p.edges) {
        if (f >= E.edges.size()) throw InputError("bad_path", "edge index out of range");
        if (E.edges[f].src != at)
            throw InputError("bad_path", "edges are not consecutively composable");
        at = E.edges[f].dst;
    }
    return at;
}

std::string path_label(const DirectedGraph& E, const Path& p) {
    if (p.edges.empty()) return E.vertices.at(p.base);
    std::string out;
    for (uint32_t f : p.edges) {
        if (!out.empty()) out += ".";
        out += E.edges.at(f).name;
    }
    return out;
}

std::vector<std::vector<bool>> reachability(const DirectedGraph& E) {
    uint32_t n = E.n_vertices();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (uint32_t s = 0; s < n; ++s) {
        std::vector<uint32_t> stack{s};
        reach[s][s] = true;
        while (!stack.empty()) {
            uint32_t v = stack.back();
            stack.pop_back();
            for (const auto& e : E.edges)
                if (e.src == v && !reach[s][e.dst]) {
                    reach[s][e.dst] = true;
                    stack.push_back(e.dst);
                }
        }
    }
    return reach;
}

Mt3Report satisfies_mt3(const DirectedGraph& E) {
    auto reach = reachability(E);
    uint32_t n = E.n_vertices();
    for (uint32_t u = 0; u < n; ++u)
        for (uint32_t v = u + 1; v < n; ++v) {
            bool common = false;
            for (uint32_t w = 0; w < n && !common; ++w)
                common = reach[u][w] && reach[v][w];
            if (!common) return {false, std::make_pair(u, v)};
        }
    return {true, std::nullopt};
}

LpaRealization build_lpa_acyclic(const DirectedGraph& E, const FiniteRing& R,
                                 const Caps& caps) {
    if (!R.unit) throw InputError("unital_required", "coefficient ring must be unital");
    if (!E.infinite_emitters.empty())
        throw InputError("infinite_emitter",
                         "the matrix realization needs every vertex to emit finitely");
    if (has_cycle(E)) throw InputError("not_acyclic", "the graph has a directed cycle");

    const uint32_t k = R.rank, m = R.modulus;
    std::vector<Path> paths = all_paths(E, 4096);
    std::stable_sort(paths.begin(), paths.end(), [&](const Path& a, const Path& b) {
        if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
        if (a.base != b.base) return a.base < b.base;
        return a.edges < b.edges;
    });

    LpaRealization L;
    L.graph = E;
    for (uint32_t v = 0; v < E.n_vertices(); ++v)
        if (E.is_sink(v)) L.sinks.push_back(v);
    L.sink_paths.resize(L.sinks.size());
    std::vector<std::map<Path, uint32_t>> index(L.sinks.size());
    for (size_t b = 0; b < L.sinks.size(); ++b)
        for (const Path& p : paths)
            if (path_range(E, p) == L.sinks[b]) {
                index[b].emplace(p, static_cast<uint32_t>(L.sink_paths[b].size()));
                L.sink_paths[b].push_back(p);
            }

    uint64_t rank = 0;  // a finite acyclic graph always has a sink, so rank >= k
    for (const auto& ps : L.sink_paths)
        rank += static_cast<uint64_t>(ps.size()) * ps.size() * k;
    if (pow_sat(m, rank) > caps.max_elements)
        throw CapExceeded("ring_size", "matrix realization would exceed the element cap");

    std::vector<FiniteRing> parts;
    for (const auto& ps : L.sink_paths)
        parts.push_back(matrix_ring(R, static_cast<uint32_t>(ps.size())));
    FiniteRing S = parts.size() == 1 ? std::move(parts[0]) : direct_sum_ring(parts);

    BlockLayout B;
    B.k = k;
    {
        uint32_t off = 0;
        for (const auto& ps : L.sink_paths) {
            B.sizes.push_back(static_cast<uint32_t>(ps.size()));
            B.offsets.push_back(off);
            off += static_cast<uint32_t>(ps.size() * ps.size()) * k;
        }
    }

    auto embed = [&](const Cell& c, Vec& into) {
        for (uint32_t l = 0; l < k; ++l) {
            uint32_t& slot = into[B.at(c, l)];
            slot = (slot + (*R.unit)[l]) % m;
        }
    };
    L.vertex_images.assign(E.n_vertices(), Vec(S.rank, 0));
    for (uint32_t v = 0; v < E.n_vertices(); ++v)
        for (uint32_t b = 0; b < L.sinks.size(); ++b)
            for (uint32_t i = 0; i < L.sink_paths[b].size(); ++i)
                if (path_source(E, L.sink_paths[b][i]) == v)
                    embed({b, i, i}, L.vertex_images[v]);
    L.edge_images.assign(E.edges.size(), Vec(S.rank, 0));
    L.edge_star_images.assign(E.edges.size(), Vec(S.rank, 0));
    for (uint32_t f = 0; f < E.edges.size(); ++f)
        for (uint32_t b = 0; b < L.sinks.size(); ++b)
            for (uint32_t j = 0; j < L.sink_paths[b].size(); ++j) {
                const Path& gamma = L.sink_paths[b][j];
                if (path_source(E, gamma) != E.edges[f].dst) continue;
                Path fg{E.edges[f].src, {}};
                fg.edges.push_back(f);
                fg.edges.insert(fg.edges.end(), gamma.edges.begin(), gamma.edges.end());
                uint32_t i = index[b].at(fg);
                embed({b, i, j}, L.edge_images[f]);
                embed({b, j, i}, L.edge_star_images[f]);
            }

    // the five defining relations, on the generator images
    for (uint32_t v = 0; v < E.n_vertices(); ++v)
        for (uint32_t w = 0; w < E.n_vertices(); ++w) {
            Vec expect = v == w ? L.vertex_images[v] : Vec(S.rank, 0);
            if (S.mul(L.vertex_images[v], L.vertex_images[w]) != expect)
                throw TheoremViolation("lpa_relations", "vertex idempotents fail at " +
                                                            E.vertices[v] + "," +
                                                            E.vertices[w]);
        }
    for (uint32_t f = 0; f < E.edges.size(); ++f) {
        const Vec& fi = L.edge_images[f];
        const Vec& fs = L.edge_star_images[f];
        if (S.mul(L.vertex_images[E.edges[f].src], fi) != fi ||
            S.mul(fi, L.vertex_images[E.edges[f].dst]) != fi)
            throw TheoremViolation("lpa_relations",
                                   "edge endpoints fail at " + E.edges[f].name);
        if (S.mul(L.vertex_images[E.edges[f].dst], fs) != fs ||
            S.mul(fs, L.vertex_images[E.edges[f].src]) != fs)
            throw TheoremViolation("lpa_relations",
                                   "ghost endpoints fail at " + E.edges[f].name);
        for (uint32_t g = 0; g < E.edges.size(); ++g) {
            Vec expect = f == g ? L.vertex_images[E.edges[f].dst] : Vec(S.rank, 0);
            if (S.mul(fs, L.edge_images[g]) != expect)
                throw TheoremViolation("lpa_relations", "ghost products fail at " +
                                                            E.edges[f].name + "," +
                                                            E.edges[g].name);
        }
    }
    for (uint32_t v = 0; v < E.n_vertices(); ++v) {
        if (!E.is_regular(v)) continue;
        Vec sum(S.rank, 0);
        for (uint32_t f : E.out_edges(v)) {
            Vec ff = S.mul(L.edge_images[f], L.edge_star_images[f]);
            for (uint32_t t = 0; t < S.rank; ++t) sum[t] = (sum[t] + ff[t]) % m;
        }
        if (sum != L.vertex_images[v])
            throw TheoremViolation("lpa_relations",
                                   "range decomposition fails at " + E.vertices[v]);
    }

    std::vector<Deg> degrees(S.rank);
    for (uint32_t b = 0; b < L.sinks.size(); ++b)
        for (uint32_t i = 0; i < B.sizes[b]; ++i)
            for (uint32_t j = 0; j < B.sizes[b]; ++j)
                for (uint32_t l = 0; l < k; ++l)
                    degrees[B.at({b, i, j}, l)] =
                        Deg{int64_t(L.sink_paths[b][i].length()) -
                            int64_t(L.sink_paths[b][j].length())};
    L.ring = make_graded_ring(std::move(S), lattice_grade_group(1), std::move(degrees));

    GradingFlags fl = classify_grading(L.ring, caps);
    if (!fl.epsilon_strong || !fl.nearly_epsilon_strong)
        throw TheoremViolation("lpa_classification",
                               "realization fails the epsilon-strong classification");
    return L;
}

Vec path_image(const LpaRealization& L, const Path& p) {
    path_range(L.graph, p);  // validates composability
    if (p.edges.empty()) return L.vertex_images.at(p.base);
    Vec out = L.edge_images.at(p.edges.front());
    for (size_t i = 1; i < p.edges.size(); ++i)
        out = L.ring.ring.mul(out, L.edge_images.at(p.edges[i]));
    return out;
}

Vec path_star_image(const LpaRealization& L, const Path& p) {
    path_range(L.graph, p);
    if (p.edges.empty()) return L.vertex_images.at(p.base);
    Vec out = L.edge_star_images.at(p.edges.back());
    for (size_t i = p.edges.size() - 1; i-- > 0;)
        out = L.ring.ring.mul(out, L.edge_star_images.at(p.edges[i]));
    return out;
}

LpaPrimeReport lpa_prime_decision(const DirectedGraph& E, bool ring_is_prime) {
    Mt3Report mt3 = satisfies_mt3(E);
    LpaPrimeReport rep;
    rep.ring_prime = ring_is_prime;
    rep.mt3 = mt3.holds;
    rep.witness = mt3.witness;
    rep.prime = ring_is_prime && mt3.holds;
    return rep;
}

LpaPrimeReport lpa_prime_decision(const DirectedGraph& E, const FiniteRing& R,
                                  const Caps& caps) {
    if (!R.unit) throw InputError("unital_required", "coefficient ring must be unital");
    LpaPrimeReport rep = lpa_prime_decision(E, is_prime(R, caps).holds);
    if (E.infinite_emitters.empty() && !has_cycle(E)) {
        try {
            LpaRealization L = build_lpa_acyclic(E, R, caps);
            PrimenessReport d = decide_prime(L.ring, PrimeStrategy::Auto, caps);
            if (d.prime != rep.prime)
                throw TheoremViolation("lpa_mismatch",
                                       "criterion disagrees with the graded decision");
            rep.cross_check = std::move(d);
        } catch (const CapExceeded&) {
            // too large to realize; the criterion stands alone
        }
    }
    return rep;
}

CornerReduction tomforde_reduce(const LpaRealization& L, const Vec& a) {
    const FiniteRing& S = L.ring.ring;
    if (a.size() != S.rank) throw InputError("malformed_data", "element has wrong length");
    Vec ar(a);
    for (auto& x : ar) x %= S.modulus;
    if (zmod::is_zero_vec(ar)) throw InputError("zero_input", "element is zero");
    for (uint32_t t = 0; t < S.rank; ++t)
        if (ar[t] && L.ring.degrees[t] != Deg{0})
            throw InputError("inhomogeneous", "element is not homogeneous of degree zero");

    BlockLayout B = layout_of(L);
    const uint32_t k = B.k;
    auto corner_form = [&](const Vec& x) -> std::optional<std::pair<uint32_t, Vec>> {
        for (uint32_t v = 0; v < L.graph.n_vertices(); ++v) {
            std::vector<Cell> diag = diagonal_cells_of_vertex(L, v);
            if (diag.empty()) continue;
            Vec t(k, 0);
            for (uint32_t l = 0; l < k; ++l) t[l] = x[B.at(diag.front(), l)];
            if (zmod::is_zero_vec(t)) continue;
            Vec expect(S.rank, 0);
            for (const Cell& c : diag)
                for (uint32_t l = 0; l < k; ++l) expect[B.at(c, l)] = t[l];
            if (x == expect) return std::make_pair(v, t);
        }
        return std::nullopt;
    };

    std::vector<Path> paths = all_paths(L.graph, 4096);
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < paths.size(); ++i)
        for (size_t j = 0; j < paths.size(); ++j) pairs.push_back({i, j});
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
        size_t lp = paths[p.first].edges.size() + paths[p.second].edges.size();
        size_t lq = paths[q.first].edges.size() + paths[q.second].edges.size();
        if (lp != lq) return lp < lq;
        return p < q;
    });
    for (const auto& [i, j] : pairs) {
        Vec x = S.mul(path_star_image(L, paths[i]), S.mul(ar, path_image(L, paths[j])));
        if (auto c = corner_form(x))
            return {paths[i], paths[j], c->first, std::move(c->second)};
    }
    throw TheoremViolation("reduction_exhausted",
                           "no path pair reduced the element to a vertex corner");
}

bool mt3_ideal_criterion_check(const LpaRealization& L, const Caps& caps) {
    (void)caps;
    auto reach = reachability(L.graph);
    uint32_t n = L.graph.n_vertices();
    bool consistent = true;
    for (uint32_t v = 0; v < n; ++v)
        for (uint32_t w = 0; w < n; ++w) {
            bool common = false;
            for (uint32_t y = 0; y < n && !common; ++y) common = reach[v][y] && reach[w][y];
            Submodule Iv = ideal_from_gens(L.ring.ring, {L.vertex_images[v]});
            Submodule Iw = ideal_from_gens(L.ring.ring, {L.vertex_images[w]});
            bool zero = submodule_product(L.ring.ring, Iv, Iw).is_zero();
            consistent = consistent && (zero == !common);
        }
    return consistent;
}

}  // namespace gplab
