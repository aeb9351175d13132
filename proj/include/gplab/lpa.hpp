#ifndef GPLAB_LPA_HPP
#define GPLAB_LPA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gplab/graded.hpp"
#include "gplab/modring.hpp"
#include "gplab/primality.hpp"

namespace gplab {

// Directed graphs, the downward-directedness condition MT-3 on their vertex
// preorder, the primeness criterion for Leavitt path algebras, and a concrete
// matrix realization for finite acyclic graphs that lets the criterion be
// cross-checked by exhaustive search.

struct DirectedGraph {
    struct Edge {
        std::string name;
        uint32_t src = 0, dst = 0;
    };
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    // vertices carrying edges beyond the listed ones; such a vertex is
    // neither a sink nor regular, and the matrix builder rejects the graph
    std::vector<uint32_t> infinite_emitters;

    uint32_t n_vertices() const { return static_cast<uint32_t>(vertices.size()); }
    bool is_infinite_emitter(uint32_t v) const;
    std::vector<uint32_t> out_edges(uint32_t v) const;  // indices, ascending
    bool is_sink(uint32_t v) const;
    bool is_regular(uint32_t v) const;  // emits at least one and finitely many
};

// Checks endpoint indices, label uniqueness, and emitter flags.
DirectedGraph make_graph(std::vector<std::string> vertices,
                         std::vector<DirectedGraph::Edge> edges,
                         std::vector<uint32_t> infinite_emitters = {});

// A vertex (length zero) or a composable chain of edges starting there.
struct Path {
    uint32_t base = 0;                // the source vertex
    std::vector<uint32_t> edges;      // edge indices, consecutively composable

    uint32_t length() const { return static_cast<uint32_t>(edges.size()); }
    auto operator<=>(const Path&) const = default;
};

uint32_t path_source(const DirectedGraph& E, const Path& p);
uint32_t path_range(const DirectedGraph& E, const Path& p);
std::string path_label(const DirectedGraph& E, const Path& p);

// Row v holds the vertices reachable from v by a path, length zero included.
std::vector<std::vector<bool>> reachability(const DirectedGraph& E);

struct Mt3Report {
    bool holds;
    // least vertex pair with no common reachable vertex, when it fails
    std::optional<std::pair<uint32_t, uint32_t>> witness;
};

// Downward directedness of the reachability preorder: every two vertices can
// reach a common one.
Mt3Report satisfies_mt3(const DirectedGraph& E);

// The matrix realization of the path algebra of a finite acyclic graph: one
// full matrix ring over R per sink, indexed by the paths ending there, summed
// over sinks, with the canonical grading by path-length difference.
struct LpaRealization {
    DirectedGraph graph;
    GradedRing ring;
    std::vector<uint32_t> sinks;                // block order
    std::vector<std::vector<Path>> sink_paths;  // per block, by length then lex
    std::vector<Vec> vertex_images;             // per vertex
    std::vector<Vec> edge_images;               // per edge
    std::vector<Vec> edge_star_images;          // per edge
};

// Direct sum over sinks of the matrix rings above.  The generator images are
// checked against all five defining relations of the path algebra, and the
// grading is classified and must come out epsilon-strong.  Requires a finite
// acyclic graph with no infinite-emitter flags and a unital ring.
LpaRealization build_lpa_acyclic(const DirectedGraph& E, const FiniteRing& R,
                                 const Caps& caps = {});

// Image of a path: the product of its edge images, or the vertex idempotent
// for length zero.  The starred form multiplies the reversed star images.
Vec path_image(const LpaRealization& L, const Path& p);
Vec path_star_image(const LpaRealization& L, const Path& p);

struct LpaPrimeReport {
    bool prime;
    bool ring_prime;
    bool mt3;
    std::optional<std::pair<uint32_t, uint32_t>> witness;  // MT-3 failure pair
    std::optional<PrimenessReport> cross_check;  // built realization verdict
};

// The path algebra over R is prime exactly when R is prime and the graph
// satisfies MT-3.  The ring overload decides R by search (R must be unital)
// and, when the graph is acyclic and the realization fits the caps,
// cross-checks the verdict against the graded decision on the built ring.
LpaPrimeReport lpa_prime_decision(const DirectedGraph& E, bool ring_is_prime);
LpaPrimeReport lpa_prime_decision(const DirectedGraph& E, const FiniteRing& R,
                                  const Caps& caps = {});

struct CornerReduction {
    Path alpha, beta;
    uint32_t vertex = 0;
    Vec t;  // nonzero coefficient with alpha* a beta = t * vertex
};

// For a nonzero degree-zero element a, finds paths alpha, beta with
// alpha* a beta a nonzero multiple of a single vertex.  Pairs are searched in
// increasing total length; existence is guaranteed, so exhausting the finite
// path set signals a bug.
CornerReduction tomforde_reduce(const LpaRealization& L, const Vec& a);

// For every vertex pair (v, w): the two-sided ideal product S v S w S
// vanishes exactly when no vertex is reachable from both v and w.  Returns
// whether that equivalence held for all pairs.
bool mt3_ideal_criterion_check(const LpaRealization& L, const Caps& caps = {});

}  // namespace gplab

#endif
