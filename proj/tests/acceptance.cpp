// Acceptance gate: nine independent suites, one verdict line each.  Every
// check is exact; a suite passes only when all of its comparisons hold and
// none of the library's internal assertions fired.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "gplab/constructions.hpp"
#include "gplab/corpus.hpp"
#include "gplab/lpa.hpp"
#include "gplab/primality.hpp"
#include "gplab/prng.hpp"

using namespace gplab;

namespace {

bool require(bool cond, const std::string& what) {
    if (!cond) std::fprintf(stderr, "  failed: %s\n", what.c_str());
    return cond;
}

// 1. Matrix rings with the row-minus-column integer grading: the flagship
// example, the principal-component contrast, and primeness of M_n(R)
// against brute force for small n and R.
bool matrix_ring_suite(const CorpusBatch&) {
    bool ok = true;
    GradedRing m2 = build_matrix_graded(zmod_ring(2), 2, MatrixGradeMode::Integer);
    GradingFlags f = classify_grading(m2);
    ok &= require(f.epsilon_strong && !f.strong, "M2(F2) epsilon-strong, not strong");
    ok &= require(decide_prime(m2).prime, "M2(F2) prime");
    ok &= require(!is_prime(direct_sum_ring({zmod_ring(2), zmod_ring(2)})).holds,
                  "principal component F2+F2 not prime");
    ok &= require(is_G_prime(m2).holds, "principal component grade-invariantly prime");
    ok &= require(!decide_prime(build_matrix_graded(zmod_ring(4), 2,
                                                    MatrixGradeMode::Integer))
                       .prime,
                  "M2(Z4) not prime");

    const FiniteRing rings[3] = {zmod_ring(2), zmod_ring(3), zmod_ring(4)};
    const char* names[3] = {"F2", "F3", "Z4"};
    for (int r = 0; r < 3; ++r) {
        bool base = is_prime(rings[r]).holds;
        for (uint32_t n = 1; n <= 3; ++n) {
            bool brute = is_prime(matrix_ring(rings[r], n)).holds;
            ok &= require(base == brute, std::string("M_") + std::to_string(n) +
                                             "(" + names[r] + ") primeness");
        }
    }
    return ok;
}

// 2. Group rings: R[G] is prime exactly when R is prime and G has no
// nontrivial finite normal subgroup.  Concrete finite groups are compared
// against brute force on the built ring; infinite groups take the
// decision-only path.
bool group_ring_connell_suite(const CorpusBatch&) {
    bool ok = true;
    const std::vector<FiniteRing> rings = {
        zmod_ring(2), zmod_ring(3), zmod_ring(4),
        direct_sum_ring({zmod_ring(2), zmod_ring(2)})};
    const char* ring_names[4] = {"F2", "F3", "Z4", "F2+F2"};
    const char* finite_groups[5] = {"1", "C2", "C3", "C4", "C2 x C2"};
    for (size_t r = 0; r < rings.size(); ++r)
        for (const char* gx : finite_groups) {
            SymbolicGroup g = parse_symbolic_group(gx);
            ConnellReport rep = connell_decision(rings[r], g);
            GradedRing S = build_group_ring(rings[r], symbolic_to_table(g));
            ok &= require(rep.prime == is_prime(S.ring).holds,
                          std::string(ring_names[r]) + "[" + gx + "]");
        }
    const char* free_groups[3] = {"Z", "Z^2", "F2"};
    for (size_t r = 0; r < rings.size(); ++r)
        for (const char* gx : free_groups) {
            ConnellReport rep = connell_decision(rings[r], parse_symbolic_group(gx));
            ok &= require(rep.prime == is_prime(rings[r]).holds,
                          std::string(ring_names[r]) + "[" + gx + "] decision-only");
        }
    return ok;
}

// 3. On every nearly epsilon-strong corpus case over a finite grade group,
// the five statements of the equivalence (non-primeness and the four datum
// existences) agree, and the implication chain holds whenever the grading
// is non-degenerate.  Any internal assertion failure aborts the suite.
bool equivalence_harness_corpus(const CorpusBatch& corpus) {
    bool ok = true;
    int completed = 0;
    for (const CorpusCase& c : corpus.cases) {
        if (!c.graded.group.finite()) continue;
        GradingFlags f = classify_grading(c.graded);
        if (!f.nearly_epsilon_strong) continue;
        HarnessReport h{};
        try {
            h = main_theorem_harness(c.graded);
        } catch (const CapExceeded&) {
            continue;
        }
        ok &= require(h.not_prime == h.exists_b && h.exists_b == h.exists_c &&
                          h.exists_c == h.exists_d && h.exists_d == h.exists_e,
                      c.name + " conditions agree");
        if (f.non_degenerate)
            ok &= require((!h.exists_e || h.exists_d) && (!h.exists_d || h.exists_c) &&
                              (!h.exists_c || h.exists_b) && (!h.exists_b || h.not_prime),
                          c.name + " implication chain");
        ++completed;
    }
    ok &= require(completed >= 25,
                  "harness completed on " + std::to_string(completed) +
                      " cases, need 25");
    return ok;
}

// 4. Every datum any search returns passes independent verification, and
// brute force confirms non-primeness with an explicit witness pair.  The
// smallest group ring pins the classical datum shape.
bool np_datum_soundness(const CorpusBatch& corpus) {
    bool ok = true;
    for (const CorpusCase& c : corpus.cases) {
        if (!c.graded.group.finite()) continue;
        PrimenessReport brute = is_prime_graded(c.graded);
        for (char fl : {'b', 'c', 'd', 'e'}) {
            std::optional<NPDatum> d;
            try {
                d = search_np_datum(c.graded, fl);
            } catch (const CapExceeded&) {
                continue;
            }
            if (!d) continue;
            DatumCheck chk = verify_np_datum(c.graded, *d, fl);
            ok &= require(chk.ok, c.name + " datum '" + fl + "' verifies (" +
                                      chk.failed + ")");
            ok &= require(!brute.prime && brute.witness_a.has_value() &&
                              brute.witness_b.has_value(),
                          c.name + " brute-force witness");
        }
    }

    GradedRing f2c2 = build_group_ring(zmod_ring(2), cyclic_group(2));
    auto d = search_np_datum(f2c2, 'b');
    ok &= require(d.has_value(), "F2[C2] datum found");
    if (d) {
        std::vector<uint32_t> whole = {0, 1};
        ok &= require(d->H.elems == whole && d->N.elems == whole,
                      "F2[C2] datum has H = N = C2");
        Mat one_plus_g = {{1, 1}};
        ok &= require(d->A_tilde.rows == one_plus_g && d->B_tilde.rows == one_plus_g,
                      "F2[C2] datum ideals generated by 1 + g");
    }
    return ok;
}

// 5. The restriction I -> I n S_e and extension J -> S J S are mutually
// inverse between graded ideals and invariant ideals of the principal
// component, matching prime members on both sides; on s-unital lattice
// cases graded primeness equals ungraded primeness.
bool graded_ideal_correspondence_suite(const CorpusBatch& corpus) {
    bool ok = true;
    for (const CorpusCase& c : corpus.cases) {
        CorrespondenceReport r = graded_ideal_correspondence(c.graded);
        ok &= require(r.graded_ideals == r.invariant_ideals,
                      c.name + " ideal counts match");
        ok &= require(r.graded_prime_ideals == r.g_prime_ideals,
                      c.name + " prime ideal counts match");
        if (!c.graded.group.finite() && classify_grading(c.graded).ring_s_unital)
            ok &= require(is_graded_prime(c.graded).holds ==
                              is_prime(c.graded.ring).holds,
                          c.name + " graded primeness = primeness");
    }
    return ok;
}

// 6. Torsion-free shortcut: over the integers, primeness of the whole ring
// equals invariant primeness of the principal component on every nearly
// epsilon-strong case; the sample must include a partial action of Z.
bool ordered_shortcut_agreement(const CorpusBatch& corpus) {
    bool ok = true;
    bool saw_partial = false;
    int checked = 0;
    for (const CorpusCase& c : corpus.cases) {
        if (c.graded.group.finite()) continue;
        if (!classify_grading(c.graded).nearly_epsilon_strong) continue;
        ok &= require(is_G_prime(c.graded).holds == is_prime_graded(c.graded).prime,
                      c.name + " shortcut agrees with brute force");
        if (c.family == "partial_skew") saw_partial = true;
        ++checked;
    }
    ok &= require(checked > 0, "lattice-graded cases present");
    ok &= require(saw_partial, "partial action of Z present");
    return ok;
}

// 7. Conjugation calculus on ideals of the principal component, over every
// pair of ideals and every support degree: functoriality containments,
// equality of products under nearly epsilon-strong gradings, the switch
// identity, epsilon-invariance, and minimality of the invariant closure.
bool invariant_ideal_calculus(const CorpusBatch& corpus) {
    bool ok = true;
    int used = 0;
    for (const CorpusCase& c : corpus.cases) {
        const GradedRing& S = c.graded;
        std::vector<Submodule> ideals;
        try {
            ideals = enumerate_block_ideals(S.ring, principal_block(S));
        } catch (const CapExceeded&) {
            continue;
        }
        if (ideals.size() > 24) continue;
        GradingFlags f = classify_grading(S);
        std::vector<Deg> degs = S.support();
        GradedSubgroup whole = whole_grade_group(S);

        // conjugates of every ideal at every support degree, reused below
        std::vector<std::vector<Submodule>> conj(ideals.size());
        for (size_t i = 0; i < ideals.size(); ++i)
            for (const Deg& x : degs)
                conj[i].push_back(conjugate_ideal(S, ideals[i], x));

        std::vector<char> invariant(ideals.size());
        for (size_t i = 0; i < ideals.size(); ++i)
            invariant[i] = is_invariant(S, ideals[i], whole);

        for (size_t i = 0; i < ideals.size() && ok; ++i) {
            const Submodule& I = ideals[i];
            if (f.nearly_epsilon_strong)
                ok &= require(is_epsilon_invariant(S, I),
                              c.name + " epsilon-invariance of ideal " +
                                  std::to_string(i));

            Submodule cl = invariant_closure(S, I, whole);
            if (f.principal_s_unital)
                ok &= require(I.subset_of(cl), c.name + " closure contains ideal");
            ok &= require(is_invariant(S, cl, whole), c.name + " closure invariant");
            for (size_t k = 0; k < ideals.size(); ++k)
                if (invariant[k] && I.subset_of(ideals[k]))
                    ok &= require(cl.subset_of(ideals[k]),
                                  c.name + " closure minimal");

            // composing conjugations never grows past the combined degree
            for (size_t xi = 0; xi < degs.size(); ++xi)
                for (size_t yi = 0; yi < degs.size(); ++yi) {
                    Submodule twice = conjugate_ideal(S, conj[i][xi], degs[yi]);
                    Submodule combined =
                        conjugate_ideal(S, I, S.group.mul(degs[xi], degs[yi]));
                    ok &= require(twice.subset_of(combined),
                                  c.name + " iterated conjugate containment");
                }

            for (size_t j = 0; j < ideals.size(); ++j) {
                const Submodule& J = ideals[j];
                Submodule IJ = submodule_product(S.ring, I, J);
                for (size_t xi = 0; xi < degs.size(); ++xi) {
                    Submodule prod_conj =
                        submodule_product(S.ring, conj[i][xi], conj[j][xi]);
                    Submodule conj_prod = conjugate_ideal(S, IJ, degs[xi]);
                    ok &= require(prod_conj.subset_of(conj_prod),
                                  c.name + " product conjugate containment");
                    if (f.nearly_epsilon_strong)
                        ok &= require(prod_conj == conj_prod,
                                      c.name + " product conjugate equality");
                    if (I.subset_of(J))
                        ok &= require(conj[i][xi].subset_of(conj[j][xi]),
                                      c.name + " conjugation monotone");
                }
            }

            if (f.nearly_epsilon_strong)
                for (size_t yi = 0; yi < degs.size(); ++yi) {
                    Submodule comp = S.component(degs[yi]);
                    Submodule left = submodule_product(S.ring, I, comp);
                    Submodule right = submodule_product(S.ring, comp, conj[i][yi]);
                    ok &= require(left == right, c.name + " switch identity");
                }
        }
        ++used;
    }
    ok &= require(used >= 10, "calculus ran on " + std::to_string(used) +
                                  " cases, need 10");
    return ok;
}

// Fixed enumeration of small acyclic graphs whose realizations stay small
// enough for brute force: all vertex counts up to three with edge
// multiplicity up to two, the four-vertex simple graphs with at most three
// edges, and the five-vertex simple graphs with at most two edges.  Arcs
// always point from lower to higher index, so every graph is acyclic.
std::vector<DirectedGraph> lpa_enumeration() {
    std::vector<DirectedGraph> out;
    auto add = [&](uint32_t nv, const std::vector<std::pair<uint32_t, uint32_t>>& arcs) {
        // paths ending at each vertex; arcs only run upward so one sweep does
        std::vector<uint64_t> ending(nv, 1);
        for (uint32_t w = 0; w < nv; ++w)
            for (const auto& [u, v] : arcs)
                if (v == w) ending[w] += ending[u];
        uint64_t rank = 0;
        for (uint32_t w = 0; w < nv; ++w) {
            bool sink = true;
            for (const auto& [u, v] : arcs)
                if (u == w) sink = false;
            if (sink) rank += ending[w] * ending[w];
        }
        if (rank > 12) return;  // keep brute force at or below 4^12 elements
        std::vector<std::string> verts;
        for (uint32_t i = 0; i < nv; ++i) verts.push_back("v" + std::to_string(i));
        std::vector<DirectedGraph::Edge> edges;
        for (const auto& [u, v] : arcs)
            edges.push_back({"e" + std::to_string(edges.size()), u, v});
        out.push_back(make_graph(verts, edges));
    };

    add(1, {});
    for (uint32_t m = 0; m <= 2; ++m) {
        std::vector<std::pair<uint32_t, uint32_t>> arcs(m, {0, 1});
        add(2, arcs);
    }
    for (uint32_t a = 0; a <= 2; ++a)
        for (uint32_t b = 0; b <= 2; ++b)
            for (uint32_t c = 0; c <= 2; ++c) {
                std::vector<std::pair<uint32_t, uint32_t>> arcs;
                arcs.insert(arcs.end(), a, {0, 1});
                arcs.insert(arcs.end(), b, {0, 2});
                arcs.insert(arcs.end(), c, {1, 2});
                add(3, arcs);
            }
    const std::pair<uint32_t, uint32_t> pairs4[6] = {{0, 1}, {0, 2}, {0, 3},
                                                     {1, 2}, {1, 3}, {2, 3}};
    for (uint32_t mask = 0; mask < 64; ++mask) {
        if (__builtin_popcount(mask) > 3) continue;
        std::vector<std::pair<uint32_t, uint32_t>> arcs;
        for (int b = 0; b < 6; ++b)
            if (mask & (1u << b)) arcs.push_back(pairs4[b]);
        add(4, arcs);
    }
    std::vector<std::pair<uint32_t, uint32_t>> pairs5;
    for (uint32_t i = 0; i < 5; ++i)
        for (uint32_t j = i + 1; j < 5; ++j) pairs5.push_back({i, j});
    for (uint32_t mask = 0; mask < (1u << 10); ++mask) {
        if (__builtin_popcount(mask) > 2) continue;
        std::vector<std::pair<uint32_t, uint32_t>> arcs;
        for (size_t b = 0; b < pairs5.size(); ++b)
            if (mask & (1u << b)) arcs.push_back(pairs5[b]);
        add(5, arcs);
    }
    return out;
}

// 8. Path algebras of every graph in the enumeration over F2 and Z/4: the
// reachability criterion against brute force on the realization, the
// generator relations, the vertex-ideal consistency check, and corner
// reductions of random homogeneous degree-zero elements re-verified by
// multiplication.
bool leavitt_path_algebra_suite(const CorpusBatch&) {
    bool ok = true;
    std::vector<DirectedGraph> graphs = lpa_enumeration();
    ok &= require(graphs.size() >= 50, "enumeration holds " +
                                           std::to_string(graphs.size()) +
                                           " graphs, need 50");
    Caps big;
    big.max_elements = 1ull << 26;
    SplitMix64 rng{kCorpusSeed ^ 0x5eedb0a7ull};
    int reductions = 0;
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
        const DirectedGraph& E = graphs[gi];
        for (uint32_t m : {2u, 4u}) {
            FiniteRing R = zmod_ring(m);
            std::string tag = "graph " + std::to_string(gi) + " mod " +
                              std::to_string(m);
            LpaRealization L = build_lpa_acyclic(E, R, big);
            for (uint32_t v = 0; v < E.n_vertices(); ++v)
                ok &= require(L.ring.ring.mul(L.vertex_images[v],
                                              L.vertex_images[v]) ==
                                  L.vertex_images[v],
                              tag + " vertex idempotent");
            LpaPrimeReport rep = lpa_prime_decision(E, R, big);
            ok &= require(rep.prime == is_prime(L.ring.ring, big).holds,
                          tag + " decision = brute force");
            ok &= require(mt3_ideal_criterion_check(L, big),
                          tag + " vertex-ideal consistency");

            const std::vector<uint32_t>* zero_block = L.ring.block(L.ring.e());
            ok &= require(zero_block != nullptr, tag + " degree-zero block");
            if (!zero_block) continue;
            for (int s = 0; s < 2; ++s) {
                Vec a = L.ring.ring.zero();
                do {
                    for (uint32_t idx : *zero_block)
                        a[idx] = uint32_t(rng.below(m));
                } while (zmod::is_zero_vec(a));
                CornerReduction cr = tomforde_reduce(L, a);
                Vec got = L.ring.ring.mul(
                    L.ring.ring.mul(path_star_image(L, cr.alpha), a),
                    path_image(L, cr.beta));
                Vec want = L.vertex_images[cr.vertex];
                for (uint32_t& w : want) w = (cr.t[0] * w) % m;
                ok &= require(!zmod::is_zero_vec(cr.t) && got == want,
                              tag + " corner reduction re-verified");
                ++reductions;
            }
        }
    }
    ok &= require(reductions >= 100, "ran " + std::to_string(reductions) +
                                         " corner reductions, need 100");
    return ok;
}

// 9. Classifier flags on every corpus case: the implication chain between
// the grading classes, s-unitality and non-degeneracy as consequences of
// nearly epsilon-strong, and the equivalence of strongness with vanishing
// component annihilators on epsilon-strong cases.  The classifier itself
// recomputes the nearly flag by two independent routes on every call.
bool grading_classifier_cross_validation(const CorpusBatch& corpus) {
    bool ok = true;
    int eps_cases = 0;
    for (const CorpusCase& c : corpus.cases) {
        GradingFlags f = classify_grading(c.graded);
        ok &= require(!f.strong || f.epsilon_strong, c.name + " strong => epsilon");
        ok &= require(!f.epsilon_strong || f.nearly_epsilon_strong,
                      c.name + " epsilon => nearly");
        ok &= require(!f.nearly_epsilon_strong || f.symmetric,
                      c.name + " nearly => symmetric");
        ok &= require(!f.nearly_epsilon_strong || f.ring_s_unital,
                      c.name + " nearly => s-unital");
        ok &= require(!f.nearly_epsilon_strong || f.non_degenerate,
                      c.name + " nearly => non-degenerate");
        if (f.epsilon_strong) {
            ok &= require(is_cancellative_epsilon_strong(c.graded) == f.strong,
                          c.name + " strong = cancellative");
            ++eps_cases;
        }
    }
    ok &= require(eps_cases > 0, "epsilon-strong cases present");
    return ok;
}

}  // namespace

int main() {
    CorpusBatch corpus = corpus_cases(kCorpusSeed, kCorpusCount);
    struct Criterion {
        const char* name;
        bool (*fn)(const CorpusBatch&);
    };
    const Criterion criteria[] = {
        {"matrix_ring_suite", matrix_ring_suite},
        {"group_ring_connell_suite", group_ring_connell_suite},
        {"equivalence_harness_corpus", equivalence_harness_corpus},
        {"np_datum_soundness", np_datum_soundness},
        {"graded_ideal_correspondence", graded_ideal_correspondence_suite},
        {"ordered_shortcut_agreement", ordered_shortcut_agreement},
        {"invariant_ideal_calculus", invariant_ideal_calculus},
        {"leavitt_path_algebra_suite", leavitt_path_algebra_suite},
        {"grading_classifier_cross_validation", grading_classifier_cross_validation},
    };
    int failed = 0;
    int index = 0;
    for (const Criterion& cr : criteria) {
        ++index;
        bool ok = false;
        try {
            ok = cr.fn(corpus);
        } catch (const Error& e) {
            std::fprintf(stderr, "  exception: %s\n", e.what());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "  exception: %s\n", e.what());
        }
        std::printf("%s %d %s\n", ok ? "PASS" : "FAIL", index, cr.name);
        if (!ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
