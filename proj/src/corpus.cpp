#include "gplab/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "gplab/constructions.hpp"
#include "gplab/lpa.hpp"
#include "gplab/parallel.hpp"
#include "gplab/primality.hpp"
#include "gplab/prng.hpp"

namespace gplab {

namespace {

// Shared pools.  Index order is part of the corpus format: reordering them
// changes what every seed produces.

struct RingPick {
    FiniteRing ring;
    std::string name;
};

FiniteRing dual_numbers() {
    return make_ring(2, 2, {Vec{1, 0}, Vec{0, 1}, Vec{0, 1}, Vec{0, 0}},
                     {"1", "t"}, Vec{1, 0});
}

FiniteRing pair_ring(uint32_t m) {
    return direct_sum_ring({zmod_ring(m), zmod_ring(m)});
}

RingPick base_ring(uint64_t i) {
    switch (i) {
        case 0: return {zmod_ring(2), "F2"};
        case 1: return {zmod_ring(3), "F3"};
        case 2: return {zmod_ring(4), "Z4"};
        case 3: return {zmod_ring(5), "F5"};
        case 4: return {pair_ring(2), "F2+F2"};
        default: return {dual_numbers(), "F2[t]/(t^2)"};
    }
}

struct GroupPick {
    FiniteGroup group;
    std::string name;
};

GroupPick pick_group(uint64_t i) {
    switch (i) {
        case 0: return {cyclic_group(2), "C2"};
        case 1: return {cyclic_group(3), "C3"};
        case 2: return {cyclic_group(4), "C4"};
        case 3: return {product_group(cyclic_group(2), cyclic_group(2)), "C2 x C2"};
        default: return {cyclic_group(6), "C6"};
    }
}

// Swap of the two summands of Z/m + Z/m, a ring automorphism of order two.
Mat swap2() { return {{0, 1}, {1, 0}}; }
Mat id2() { return {{1, 0}, {0, 1}}; }

// g acts by swap exactly when g is odd; a homomorphism because the cyclic
// order is even.
SkewAction parity_swap(uint32_t order) {
    SkewAction act;
    for (uint32_t g = 0; g < order; ++g)
        act.maps.push_back(g % 2 ? swap2() : id2());
    return act;
}

std::string case_name(uint32_t idx) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "case_%03u", idx);
    return buf;
}

void require_size(const FiniteRing& R, const Caps& caps) {
    if (R.element_count() > caps.max_elements)
        throw CapExceeded("ring_size", "corpus draw would exceed the element cap");
}

struct Draw {
    std::string family;
    GradedRing graded;
    Json params;
};

Draw draw_group_ring(SplitMix64& rng, const Caps& caps) {
    RingPick r = base_ring(rng.below(6));
    GroupPick g = pick_group(rng.below(5));
    GradedRing S = build_group_ring(r.ring, g.group, caps);
    return {"group_ring", std::move(S), Json{{"group", g.name}, {"ring", r.name}}};
}

Draw draw_skew(SplitMix64& rng, const Caps& caps) {
    uint64_t combo = rng.below(4);
    uint32_t m = combo == 1 ? 3 : 2;
    uint32_t order = combo < 2 ? 2 : combo == 2 ? 4 : 6;
    FiniteRing R = pair_ring(m);
    FiniteGroup G = cyclic_group(order);
    GradedRing S = build_skew_group_ring(R, G, parity_swap(order), caps);
    std::string rn = m == 3 ? "F3+F3" : "F2+F2";
    return {"skew", std::move(S),
            Json{{"group", "C" + std::to_string(order)}, {"ring", rn}}};
}

Draw draw_partial_skew(SplitMix64& rng, const Caps& caps) {
    uint64_t variant = rng.below(2);
    uint32_t m = rng.below(2) ? 3 : 2;
    FiniteRing R = pair_ring(m);
    PartialActionData d;
    d.ideals[Deg{0}] = full_submodule(m, 2);
    d.maps[Deg{0}] = id2();
    GradeGroup G = variant ? lattice_grade_group(1)
                           : finite_grade_group(cyclic_group(2));
    if (variant) {
        // Z shifts the first summand onto the second in degree one.
        d.ideals[Deg{-1}] = span_submodule(m, 2, {{1, 0}});
        d.ideals[Deg{1}] = span_submodule(m, 2, {{0, 1}});
        d.maps[Deg{1}] = Mat{{0, 1}};
        d.maps[Deg{-1}] = Mat{{1, 0}};
    } else {
        // The involution is only defined on the first summand.
        d.ideals[Deg{1}] = span_submodule(m, 2, {{1, 0}});
        d.maps[Deg{1}] = Mat{{1, 0}};
    }
    GradedRing S = build_partial_skew_group_ring(R, G, d, caps);
    return {"partial_skew", std::move(S),
            Json{{"modulus", m},
                 {"variant", variant ? "half_shift" : "one_summand"}}};
}

Draw draw_matrix(SplitMix64& rng, const Caps& caps) {
    static const std::pair<uint32_t, uint64_t> shapes[6] = {
        {2, 0}, {2, 1}, {2, 2}, {2, 5}, {3, 0}, {3, 1}};
    auto [n, ri] = shapes[rng.below(6)];
    MatrixGradeMode mode = rng.below(2) ? MatrixGradeMode::IntegerModN
                                        : MatrixGradeMode::Integer;
    // Folding M_3(F_3) to its Z/3 grading makes the datum search walk all
    // 3^9 elements of a prime ring; the integer grading answers the same
    // question through the identity component in milliseconds.
    if (n == 3 && ri == 1) mode = MatrixGradeMode::Integer;
    RingPick r = base_ring(ri);
    GradedRing S = build_matrix_graded(r.ring, n, mode, caps);
    return {"matrix", std::move(S),
            Json{{"mode", mode == MatrixGradeMode::Integer ? "integer" : "modn"},
                 {"n", n},
                 {"ring", r.name}}};
}

Draw draw_lpa(SplitMix64& rng, const Caps& caps) {
    uint32_t nv = 2 + uint32_t(rng.below(3));
    std::vector<std::string> verts;
    for (uint32_t i = 0; i < nv; ++i) verts.push_back("v" + std::to_string(i));
    std::vector<DirectedGraph::Edge> edges;
    for (uint32_t i = 0; i < nv; ++i)
        for (uint32_t j = i + 1; j < nv; ++j)
            if (rng.below(4) == 0)
                edges.push_back({"e" + std::to_string(edges.size()), i, j});
    static const uint32_t mods[3] = {2, 3, 4};
    uint32_t m = mods[rng.below(3)];
    DirectedGraph E = make_graph(verts, edges);
    LpaRealization L = build_lpa_acyclic(E, zmod_ring(m), caps);
    return {"lpa", std::move(L.ring),
            Json{{"graph", graph_to_json(E)}, {"ring", "Z" + std::to_string(m)}}};
}

Draw draw_direct_sum(SplitMix64& rng, const Caps& caps) {
    uint64_t i1 = rng.below(6);
    RingPick r1 = base_ring(i1);
    std::vector<uint64_t> pool;
    for (uint64_t i = 0; i < 6; ++i)
        if (base_ring(i).ring.modulus == r1.ring.modulus) pool.push_back(i);
    RingPick r2 = base_ring(pool[rng.below(pool.size())]);
    GroupPick g = pick_group(rng.below(5));
    GradedRing S1 = build_group_ring(r1.ring, g.group, caps);
    GradedRing S2 = build_group_ring(r2.ring, g.group, caps);
    FiniteRing R = direct_sum_ring({S1.ring, S2.ring});
    require_size(R, caps);
    std::vector<Deg> degs = S1.degrees;
    degs.insert(degs.end(), S2.degrees.begin(), S2.degrees.end());
    GradedRing S = make_graded_ring(R, S1.group, degs);
    return {"direct_sum", std::move(S),
            Json{{"group", g.name}, {"left", r1.name}, {"right", r2.name}}};
}

Draw draw_quotient(SplitMix64& rng, const Caps& caps) {
    if (rng.below(2) == 0) {
        // Group ring regraded by a cyclic subgroup's cosets.
        RingPick r = base_ring(rng.below(2));
        GroupPick g = pick_group(2 + rng.below(3));
        uint32_t x = 1 + uint32_t(rng.below(g.group.order - 1));
        Subgroup H = closure_subgroup(g.group, {x});
        GradedRing S = build_group_ring(r.ring, g.group, caps);
        GradedRing Q = induced_quotient_grading(S, from_finite_subgroup(H));
        return {"quotient", std::move(Q),
                Json{{"group", g.name},
                     {"kind", "group_ring"},
                     {"ring", r.name},
                     {"subgroup", H.elems}}};
    }
    // Integer matrix grading folded modulo a period.  Same bound as above:
    // nine basis elements over F_3 make the folded search too slow.
    uint32_t n = 2 + uint32_t(rng.below(2));
    uint64_t rdraw = rng.below(2);
    RingPick r = base_ring(n == 3 ? 0 : rdraw);
    int64_t k = 2 + int64_t(rng.below(2));
    GradedRing S = build_matrix_graded(r.ring, n, MatrixGradeMode::Integer, caps);
    GradedRing Q = induced_quotient_grading(S, from_lattice_gens({Deg{k}}));
    return {"quotient", std::move(Q),
            Json{{"kind", "matrix"}, {"n", n}, {"period", k}, {"ring", r.name}}};
}

Draw draw_case(uint32_t idx, SplitMix64& rng, const Caps& caps) {
    switch (idx % 7) {
        case 0: return draw_group_ring(rng, caps);
        case 1: return draw_skew(rng, caps);
        case 2: return draw_partial_skew(rng, caps);
        case 3: return draw_matrix(rng, caps);
        case 4: return draw_lpa(rng, caps);
        case 5: return draw_direct_sum(rng, caps);
        default: return draw_quotient(rng, caps);
    }
}

Caps tightened(const Caps& caps) {
    Caps cc = caps;
    cc.max_elements = std::min<uint64_t>(caps.max_elements, 1ull << 16);
    return cc;
}

// Everything the summary records about one case.  Cap overruns during
// analysis mark the entry rather than aborting the batch; anything else
// is a real failure and propagates.
Json analyze_case(const CorpusCase& c, const Caps& caps) {
    Json entry{{"family", c.family}, {"name", c.name}};
    entry["flags"] = flags_to_json(classify_grading(c.graded, caps));
    try {
        if (c.graded.group.finite()) {
            entry["harness"] = harness_to_json(main_theorem_harness(c.graded, caps));
        } else {
            entry["certificate"] =
                certificate_to_json(decide_prime(c.graded, PrimeStrategy::Auto, caps));
            entry["component_g_prime"] = is_G_prime(c.graded, caps).holds;
        }
    } catch (const CapExceeded& e) {
        entry["analysis_skipped"] = e.code;
    }
    return entry;
}

}  // namespace

CorpusBatch corpus_cases(uint64_t seed, uint32_t count, const Caps& caps) {
    Caps cc = tightened(caps);
    CorpusBatch batch;
    batch.seed = seed;
    for (uint32_t idx = 0; idx < count; ++idx) {
        // Independent stream per index: skips never shift later cases.
        SplitMix64 rng{seed + 0x9e3779b97f4a7c15ull * (idx + 1)};
        std::string name = case_name(idx);
        try {
            Draw d = draw_case(idx, rng, cc);
            Json data{{"family", d.family},
                      {"graded", graded_to_json(d.graded)},
                      {"name", name},
                      {"params", d.params}};
            batch.cases.push_back(
                {name, d.family, std::move(d.graded), std::move(data)});
        } catch (const CapExceeded& e) {
            static const char* fams[7] = {"group_ring", "skew", "partial_skew",
                                          "matrix", "lpa", "direct_sum", "quotient"};
            batch.skipped.push_back({name, fams[idx % 7], e.code});
        }
    }
    return batch;
}

Json generate_corpus(uint64_t seed, uint32_t count, const std::string& out_dir,
                     const Caps& caps) {
    Caps cc = tightened(caps);
    CorpusBatch batch = corpus_cases(seed, count, caps);
    std::filesystem::create_directories(out_dir);
    for (const CorpusCase& c : batch.cases)
        write_file_atomic(out_dir + "/" + c.name + ".json", dump_canonical(c.data));

    const uint32_t n = uint32_t(batch.cases.size());
    std::vector<Json> entries(n);
    std::vector<std::exception_ptr> errs(n);
    std::atomic<uint32_t> next{0};
    auto work = [&] {
        for (;;) {
            uint32_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                entries[i] = analyze_case(batch.cases[i], cc);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    unsigned nt = std::max(1u, std::min(worker_count(), n ? n : 1u));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (uint32_t i = 0; i < n; ++i)
        if (errs[i]) std::rethrow_exception(errs[i]);

    Json skipped = Json::array();
    for (const CorpusSkip& s : batch.skipped)
        skipped.push_back(
            {{"family", s.family}, {"name", s.name}, {"reason", s.reason}});
    Json summary{{"cases", entries},
                 {"count", count},
                 {"seed", seed},
                 {"skipped", skipped}};
    write_file_atomic(out_dir + "/summary.json", dump_canonical(summary));
    return summary;
}

}  // namespace gplab
