#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "gplab/constructions.hpp"
#include "gplab/corpus.hpp"
#include "gplab/json_io.hpp"
#include "gplab/lpa.hpp"
#include "gplab/primality.hpp"

using namespace gplab;

namespace {

template <typename F>
std::string code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code;
    }
    return "no_throw";
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool same_ring(const FiniteRing& a, const FiniteRing& b) {
    if (a.modulus != b.modulus || a.rank != b.rank) return false;
    if (a.labels != b.labels || a.unit != b.unit) return false;
    for (uint32_t i = 0; i < a.rank; ++i)
        for (uint32_t j = 0; j < a.rank; ++j)
            if (a.basis_product(i, j) != b.basis_product(i, j)) return false;
    return true;
}

std::filesystem::path fresh_dir(const std::string& leaf) {
    auto p = std::filesystem::temp_directory_path() / leaf;
    std::filesystem::remove_all(p);
    return p;
}

// Exit status of one CLI invocation; stdout lands in out_path.
int run_cli(const std::string& args, const std::string& out_path) {
    std::string cmd = std::string(GPLAB_CLI_PATH) + " " + args + " > " +
                      out_path + " 2>/dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string data_file(const std::string& leaf) {
    return std::string(GPLAB_DATA_DIR) + "/" + leaf;
}

}  // namespace

TEST_CASE("canonical dumps sort keys and end with a newline") {
    Json j{{"b", 1}, {"a", Json::array({1, 2})}};
    CHECK(dump_canonical(j) == "{\n \"a\": [\n  1,\n  2\n ],\n \"b\": 1\n}\n");
    CHECK(parse_json_text(dump_canonical(j)) == j);
    CHECK(code_of([] { parse_json_text("{"); }) == "bad_json");
    CHECK(code_of([] { parse_json_text(""); }) == "bad_json");
}

TEST_CASE("atomic writes and file loads round trip") {
    auto dir = fresh_dir("gplab_io_rt");
    std::filesystem::create_directories(dir);
    std::string path = (dir / "x.json").string();
    write_file_atomic(path, dump_canonical(Json{{"x", 1}}));
    CHECK(load_json_file(path) == Json{{"x", 1}});
    CHECK(!std::filesystem::exists(path + ".tmp"));
    CHECK(code_of([] { load_json_file("/nonexistent/f.json"); }) == "io_error");
    CHECK(code_of([] { write_file_atomic("/nonexistent/f.json", "x"); }) == "io_error");
}

TEST_CASE("group descriptions parse in symbolic, finite and shorthand form") {
    CHECK(symbolic_to_string(group_from_json(
              Json{{"kind", "symbolic"}, {"expr", "C2 x Z"}})) == "C2 x Z");
    CHECK(symbolic_to_string(group_from_json(Json("C4"))) == "C4");

    Json fin{{"kind", "finite"},
             {"table", Json::array({Json::array({0, 1}), Json::array({1, 0})})},
             {"labels", Json::array({"e", "g"})}};
    FiniteGroup G = finite_group_from_json(fin);
    CHECK(G.order == 2);
    CHECK(G.labels[1] == "g");
    CHECK(finite_group_from_json(group_to_json(G)).table == G.table);
    CHECK(finite_group_from_json(Json{{"kind", "symbolic"}, {"expr", "C3"}}).order == 3);
    CHECK(finite_group_from_json(Json("C2 x C2")).order == 4);

    CHECK(code_of([] { group_from_json(Json{{"kind", "weird"}}); }) == "bad_json");
    CHECK(code_of([] { group_from_json(Json::object()); }) == "bad_json");
    CHECK(code_of([&] {
              finite_group_from_json(Json{{"kind", "finite"}});
          }) == "bad_json");
}

TEST_CASE("grade groups admit finite groups and integer lattices only") {
    CHECK(!grade_group_from_json(Json("Z")).finite());
    CHECK(grade_group_from_json(Json("Z")).lattice_rank() == 1);
    CHECK(grade_group_from_json(Json("Z^2")).lattice_rank() == 2);
    CHECK(grade_group_from_json(Json("C2 x C3")).group().order == 6);
    CHECK(code_of([] { grade_group_from_json(Json("F2")); }) == "bad_json");
    CHECK(code_of([] { grade_group_from_json(Json("Z x C2")); }) == "bad_json");

    CHECK(grade_group_to_json(lattice_grade_group(1))["expr"] == "Z");
    CHECK(grade_group_to_json(lattice_grade_group(3))["expr"] == "Z^3");
    Json back = grade_group_to_json(finite_grade_group(cyclic_group(2)));
    CHECK(back["kind"] == "finite");
    CHECK(grade_group_from_json(back).group().order == 2);
}

TEST_CASE("ring presets expand and the full schema round trips") {
    FiniteRing z4 = ring_from_json(Json{{"preset", "Zmod"}, {"m", 4}});
    CHECK(same_ring(z4, zmod_ring(4)));

    FiniteRing m2 = ring_from_json(parse_json_text(
        R"({"preset": "MatrixRing", "n": 2, "base": {"preset": "Zmod", "m": 2}})"));
    CHECK(same_ring(m2, matrix_ring(zmod_ring(2), 2)));

    FiniteRing ds = ring_from_json(parse_json_text(
        R"({"preset": "DirectSum", "parts": [{"preset": "Zmod", "m": 2}, {"preset": "Zmod", "m": 2}]})"));
    CHECK(same_ring(ds, direct_sum_ring({zmod_ring(2), zmod_ring(2)})));

    // Full table form: F_2[t]/(t^2) written out by hand.
    FiniteRing dual = make_ring(2, 2, {Vec{1, 0}, Vec{0, 1}, Vec{0, 1}, Vec{0, 0}},
                                {"1", "t"}, Vec{1, 0});
    Json j = ring_to_json(dual);
    CHECK(same_ring(ring_from_json(j), dual));
    CHECK(ring_to_json(ring_from_json(j)) == j);

    CHECK(code_of([] { ring_from_json(Json{{"preset", "Nope"}}); }) == "bad_json");
    CHECK(code_of([] {
              ring_from_json(Json{{"preset", "Zmod"}, {"m", 2.5}});
          }) == "bad_json");
    CHECK(code_of([] {
              ring_from_json(parse_json_text(
                  R"({"modulus": 2, "rank": 1, "labels": ["1"], "mul": []})"));
          }) == "bad_json");
}

TEST_CASE("graded descriptions round trip over both grade group kinds") {
    Json desc = parse_json_text(R"({
        "ring": {"preset": "MatrixRing", "n": 2, "base": {"preset": "Zmod", "m": 2}},
        "group": "Z",
        "degrees": [0, -1, 1, 0]})");
    GradedRing S = graded_from_json(desc);
    GradingFlags f = classify_grading(S);
    CHECK(f.epsilon_strong);
    CHECK(!f.strong);
    Json out = graded_to_json(S);
    CHECK(graded_to_json(graded_from_json(out)) == out);
    CHECK(out["degrees"] == Json::array({Json::array({0}), Json::array({-1}),
                                         Json::array({1}), Json::array({0})}));

    GradedRing grp = build_group_ring(zmod_ring(2), cyclic_group(2));
    Json jg = graded_to_json(grp);
    CHECK(jg["degrees"] == Json::array({0, 1}));  // finite degrees are bare indices
    CHECK(graded_to_json(graded_from_json(jg)) == jg);

    GradedRing flat = make_graded_ring(zmod_ring(2), lattice_grade_group(2),
                                       {Deg{0, 0}});
    Json jf = graded_to_json(flat);
    CHECK(jf["degrees"] == Json::array({Json::array({0, 0})}));
    CHECK(graded_to_json(graded_from_json(jf)) == jf);

    CHECK(code_of([&] {
              Json bad = desc;
              bad["degrees"] = Json::array({0, -1, 1});
              graded_from_json(bad);
          }) == "bad_json");
    CHECK(code_of([&] {
              Json bad = desc;
              bad["degrees"][0] = 0.5;
              graded_from_json(bad);
          }) == "bad_json");
}

TEST_CASE("construction descriptions build the advertised rings") {
    GradedRing grp = construction_from_json(parse_json_text(
        R"({"construct": "group_ring", "ring": {"preset": "Zmod", "m": 2}, "group": "C2"})"), {});
    CHECK(grp.ring.element_count() == 4);
    CHECK(classify_grading(grp).strong);

    GradedRing sk = construction_from_json(parse_json_text(R"({
        "construct": "skew",
        "ring": {"preset": "DirectSum", "parts": [{"preset": "Zmod", "m": 2}, {"preset": "Zmod", "m": 2}]},
        "group": "C2",
        "action": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]})"), {});
    CHECK(sk.ring.element_count() == 16);
    CHECK(decide_prime(sk).prime);  // the swap glues the two summands together

    GradedRing ps = construction_from_json(parse_json_text(R"({
        "construct": "partial_skew",
        "ring": {"preset": "DirectSum", "parts": [{"preset": "Zmod", "m": 3}, {"preset": "Zmod", "m": 3}]},
        "group": "Z",
        "ideals": [{"degree": 0, "gens": [[1, 0], [0, 1]]},
                   {"degree": -1, "gens": [[1, 0]]},
                   {"degree": 1, "gens": [[0, 1]]}],
        "maps": [{"degree": 0, "map": [[1, 0], [0, 1]]},
                 {"degree": 1, "map": [[0, 1]]},
                 {"degree": -1, "map": [[1, 0]]}]})"), {});
    CHECK(ps.support().size() == 3);
    CHECK(classify_grading(ps).nearly_epsilon_strong);

    GradedRing mx = construction_from_json(parse_json_text(R"({
        "construct": "matrix", "ring": {"preset": "Zmod", "m": 3}, "n": 2, "mode": "modn"})"), {});
    CHECK(mx.group.finite());
    CHECK(mx.ring.rank == 4);

    // Dispatch: a "construct" key selects the builder, otherwise the plain
    // graded schema is expected.
    CHECK(graded_input_from_json(parse_json_text(
              R"({"construct": "group_ring", "ring": {"preset": "Zmod", "m": 2}, "group": "C2"})"), {})
              .ring.element_count() == 4);
    CHECK(code_of([] {
              graded_input_from_json(Json{{"vertices", Json::array()}}, {});
          }) == "bad_json");
    CHECK(code_of([] {
              construction_from_json(Json{{"construct", "nope"}, {"ring", Json{{"preset", "Zmod"}, {"m", 2}}}}, {});
          }) == "bad_json");
}

TEST_CASE("graph descriptions name their endpoints") {
    DirectedGraph E = make_graph({"u", "w"}, {{"f", 0, 1}});
    Json j = graph_to_json(E);
    CHECK(j["edges"][0] == Json{{"dst", "w"}, {"name", "f"}, {"src", "u"}});
    DirectedGraph back = graph_from_json(j);
    CHECK(back.vertices == E.vertices);
    CHECK(back.edges.size() == 1);
    CHECK(back.edges[0].src == 0);
    CHECK(graph_to_json(graph_from_json(j)) == j);

    DirectedGraph em = graph_from_json(parse_json_text(
        R"({"vertices": ["v"], "edges": [], "infinite_emitters": ["v"]})"));
    CHECK(em.is_infinite_emitter(0));
    CHECK(graph_to_json(em)["infinite_emitters"] == Json::array({"v"}));

    CHECK(code_of([] {
              graph_from_json(parse_json_text(
                  R"({"vertices": ["u"], "edges": [{"name": "f", "src": "u", "dst": "x"}]})"));
          }) == "bad_json");
}

TEST_CASE("report emitters mirror their reports") {
    DirectedGraph e2 = make_graph({"v1", "v2"}, {});
    CHECK(mt3_to_json(e2, satisfies_mt3(e2)) ==
          Json{{"mt3", false}, {"witness", Json::array({"v1", "v2"})}});
    DirectedGraph arrow = make_graph({"v1", "v2"}, {{"f", 0, 1}});
    CHECK(mt3_to_json(arrow, satisfies_mt3(arrow)) == Json{{"mt3", true}});

    GradedRing m2 = graded_from_json(parse_json_text(R"({
        "ring": {"preset": "MatrixRing", "n": 2, "base": {"preset": "Zmod", "m": 2}},
        "group": "Z", "degrees": [0, -1, 1, 0]})"));
    Json cert = certificate_to_json(decide_prime(m2));
    CHECK(cert["verdict"] == "prime");
    CHECK(cert["method"] == "ordered_shortcut");
    CHECK(cert["cross_check"] == true);
    CHECK(cert["criterion"].is_string());

    GradedRing f2c2 = build_group_ring(zmod_ring(2), cyclic_group(2));
    Json h = harness_to_json(main_theorem_harness(f2c2));
    CHECK(h["not_prime"] == true);
    CHECK(h["exists_b"] == true);
    CHECK(h["exists_e"] == true);
    CHECK(h["observations"] == Json::array());

    Json con = connell_to_json(
        connell_decision(zmod_ring(2), parse_symbolic_group("C2")));
    CHECK(con["verdict"] == "not_prime");
    CHECK(con["reason"] == "finite_normal_subgroup");
    CHECK(con["ring_prime"] == true);
    CHECK(con["cross_check"]["np_datum"]["H"] == Json::array({0, 1}));
    CHECK(con["cross_check"]["np_datum"]["A_gens"] == Json::array({Json::array({1, 1})}));

    auto d = search_np_datum(f2c2, 'b');
    REQUIRE(d.has_value());
    Json dj = datum_to_json(*d);
    CHECK(dj["N"] == Json::array({0, 1}));
    CHECK(dj["I_gens"] == Json::array({Json::array({1, 0})}));

    Json lp = lpa_prime_to_json(arrow, lpa_prime_decision(arrow, zmod_ring(2), {}));
    CHECK(lp["verdict"] == "prime");
    CHECK(lp["mt3"] == true);
    CHECK(lp["cross_check"]["verdict"] == "prime");
}

TEST_CASE("corpus batches are deterministic and round trip") {
    CorpusBatch a = corpus_cases(kCorpusSeed, 14);
    CorpusBatch b = corpus_cases(kCorpusSeed, 14);
    REQUIRE(a.cases.size() == 14);
    CHECK(a.skipped.empty());
    const char* cycle[7] = {"group_ring", "skew",       "partial_skew", "matrix",
                            "lpa",        "direct_sum", "quotient"};
    for (size_t i = 0; i < a.cases.size(); ++i) {
        CHECK(a.cases[i].family == cycle[i % 7]);
        CHECK(a.cases[i].name == b.cases[i].name);
        CHECK(a.cases[i].data == b.cases[i].data);
        CHECK(dump_canonical(a.cases[i].data) == dump_canonical(b.cases[i].data));
        // Every emitted description reloads to the same graded ring.
        Json g = a.cases[i].data["graded"];
        CHECK(graded_to_json(graded_from_json(g)) == g);
    }
    CHECK(a.cases[0].name == "case_000");
    CHECK(a.cases[13].name == "case_013");

    CorpusBatch c = corpus_cases(kCorpusSeed + 1, 14);
    bool differs = false;
    for (size_t i = 0; i < 14; ++i)
        if (c.cases.size() <= i || c.cases[i].data != a.cases[i].data) differs = true;
    CHECK(differs);
}

TEST_CASE("corpus skips oversized draws loudly") {
    Caps tight;
    tight.max_elements = 64;
    CorpusBatch b = corpus_cases(kCorpusSeed, 48, tight);
    CHECK(b.cases.size() + b.skipped.size() == 48);
    CHECK(!b.skipped.empty());
    for (const CorpusSkip& s : b.skipped) {
        CHECK(s.reason == "ring_size");
        CHECK(s.name.rfind("case_", 0) == 0);
    }
    for (const CorpusCase& c : b.cases)
        CHECK(c.graded.ring.element_count() <= 64);
}

TEST_CASE("corpus generation writes identical bytes on rerun") {
    auto d1 = fresh_dir("gplab_corpus_a");
    auto d2 = fresh_dir("gplab_corpus_b");
    Json s1 = generate_corpus(kCorpusSeed, 10, d1.string());
    Json s2 = generate_corpus(kCorpusSeed, 10, d2.string());
    CHECK(s1 == s2);
    CHECK(parse_json_text(read_text((d1 / "summary.json").string())) == s1);

    CorpusBatch batch = corpus_cases(kCorpusSeed, 10);
    REQUIRE(s1["cases"].size() == batch.cases.size());
    for (size_t i = 0; i < batch.cases.size(); ++i) {
        const CorpusCase& c = batch.cases[i];
        std::string f1 = read_text((d1 / (c.name + ".json")).string());
        CHECK(f1 == read_text((d2 / (c.name + ".json")).string()));
        CHECK(f1 == dump_canonical(c.data));
        const Json& entry = s1["cases"][i];
        CHECK(entry["name"] == c.name);
        CHECK(entry["family"] == c.family);
        if (c.graded.group.finite()) {
            CHECK(entry.contains("harness"));
        } else {
            CHECK(entry.contains("certificate"));
            CHECK(entry.contains("component_g_prime"));
        }
    }

    auto d3 = fresh_dir("gplab_corpus_empty");
    Json s3 = generate_corpus(kCorpusSeed, 0, d3.string());
    CHECK(s3["cases"] == Json::array());
    CHECK(s3["skipped"] == Json::array());
    CHECK(std::filesystem::exists(d3 / "summary.json"));
}

TEST_CASE("command line verbs expose the library with stable exit codes") {
    auto dir = fresh_dir("gplab_cli_runs");
    std::filesystem::create_directories(dir);
    auto out = [&](const char* leaf) { return (dir / leaf).string(); };

    CHECK(run_cli("prime --in " + data_file("m2f2_zgraded.json"), out("p.json")) == 0);
    Json p = parse_json_text(read_text(out("p.json")));
    CHECK(p["verdict"] == "prime");
    CHECK(p["method"] == "ordered_shortcut");

    CHECK(run_cli("lpa-mt3 --in " + data_file("e2.json"), out("m.json")) == 0);
    CHECK(parse_json_text(read_text(out("m.json"))) ==
          Json{{"mt3", false}, {"witness", Json::array({"v1", "v2"})}});

    CHECK(run_cli("groupring-prime --ring " + data_file("f2.json") + " --group C2",
                  out("g.json")) == 0);
    Json g = parse_json_text(read_text(out("g.json")));
    CHECK(g["verdict"] == "not_prime");
    CHECK(g["reason"] == "finite_normal_subgroup");

    std::string f2c2 = (dir / "f2c2.json").string();
    write_file_atomic(f2c2, dump_canonical(parse_json_text(
        R"({"construct": "group_ring", "ring": {"preset": "Zmod", "m": 2}, "group": "C2"})")));
    CHECK(run_cli("harness --in " + f2c2, out("h.json")) == 0);
    CHECK(parse_json_text(read_text(out("h.json")))["not_prime"] == true);
    CHECK(run_cli("np-search --in " + f2c2 + " --flavor e", out("n.json")) == 0);
    CHECK(parse_json_text(read_text(out("n.json")))["found"] == true);

    // classify in text form prints one flag per line
    CHECK(run_cli("classify --in " + data_file("m2f2_zgraded.json") + " --format text",
                  out("c.txt")) == 0);
    CHECK(read_text(out("c.txt")).find("epsilon_strong: true") != std::string::npos);

    // input error 2, cap overrun 3, graph where a grading was expected 2
    CHECK(run_cli("prime --in /nonexistent.json", out("e1.json")) == 2);
    CHECK(run_cli("prime --in " + data_file("e2.json"), out("e2.json")) == 2);
    CHECK(run_cli("np-search --in " + f2c2 + " --max-elements 2", out("e3.json")) == 3);
    CHECK(run_cli("prime --bogus", out("e4.json")) == 2);
    CHECK(run_cli("--help", out("e5.json")) == 0);

    // corpus verb round trip against the library
    auto cdir = fresh_dir("gplab_cli_corpus");
    CHECK(run_cli("corpus --out " + cdir.string() + " --seed 7 --count 5",
                  out("k.json")) == 0);
    Json k = parse_json_text(read_text(out("k.json")));
    CHECK(k["cases"] == 5);
    CHECK(k["skipped"] == 0);
    CHECK(parse_json_text(read_text((cdir / "summary.json").string())) ==
          generate_corpus(7, 5, fresh_dir("gplab_cli_corpus_ref").string()));
}
