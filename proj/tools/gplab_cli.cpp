// Command-line surface: every verb loads JSON descriptions, runs one
// operation from the library, and prints a machine-readable report on
// standard output.  Exit codes: 0 for any computed verdict, 2 for input
// errors, 3 for cap overruns, 4 for a violated theorem assertion.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gplab/constructions.hpp"
#include "gplab/corpus.hpp"
#include "gplab/json_io.hpp"
#include "gplab/lpa.hpp"
#include "gplab/primality.hpp"

namespace {

using namespace gplab;

struct Options {
    std::string format = "json";
    uint64_t max_elements = Caps{}.max_elements;
    uint64_t max_ideals = Caps{}.max_ideals;

    Caps caps() const {
        Caps c;
        c.max_elements = max_elements;
        c.max_ideals = max_ideals;
        return c;
    }
};

void add_common(CLI::App* sub, Options& opt) {
    sub->add_option("--format", opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--max-elements", opt.max_elements,
                    "largest ring the deciders will enumerate");
    sub->add_option("--max-ideals", opt.max_ideals,
                    "largest ideal family the searches will collect");
}

void emit(const Json& report, const Options& opt) {
    if (opt.format == "text") {
        for (auto it = report.begin(); it != report.end(); ++it) {
            std::cout << it.key() << ": ";
            if (it->is_string())
                std::cout << it->get<std::string>();
            else
                std::cout << it->dump();
            std::cout << "\n";
        }
    } else {
        std::cout << dump_canonical(report);
    }
}

PrimeStrategy strategy_from(const std::string& s) {
    if (s == "ordered") return PrimeStrategy::Ordered;
    if (s == "np-search") return PrimeStrategy::NPSearch;
    if (s == "brute-force") return PrimeStrategy::BruteForce;
    return PrimeStrategy::Auto;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Primeness of group-graded rings: classify gradings, decide "
                 "and certify primeness, search for witnesses"};
    app.require_subcommand(1);

    Options opt;
    std::string in_path, ring_path, group_expr, out_dir;
    std::string flavor = "b", strategy = "auto", ring_prime;
    uint64_t seed = kCorpusSeed;
    uint32_t count = kCorpusCount;
    std::optional<Json> report;

    auto* classify = app.add_subcommand("classify", "Grading taxonomy flags");
    classify->add_option("--in", in_path, "graded ring or construction file")
        ->required();
    add_common(classify, opt);
    classify->callback([&] {
        GradedRing S = graded_input_from_json(load_json_file(in_path), opt.caps());
        report = flags_to_json(classify_grading(S, opt.caps()));
    });

    auto* prime = app.add_subcommand("prime", "Decide and certify primeness");
    prime->add_option("--in", in_path, "graded ring or construction file")
        ->required();
    prime->add_option("--strategy", strategy, "auto, ordered, np-search or brute-force")
        ->check(CLI::IsMember({"auto", "ordered", "np-search", "brute-force"}));
    add_common(prime, opt);
    prime->callback([&] {
        GradedRing S = graded_input_from_json(load_json_file(in_path), opt.caps());
        report = certificate_to_json(
            decide_prime(S, strategy_from(strategy), opt.caps()));
    });

    auto* np = app.add_subcommand("np-search", "Search for a non-primeness datum");
    np->add_option("--in", in_path, "graded ring or construction file")->required();
    np->add_option("--flavor", flavor, "which datum conditions to require")
        ->check(CLI::IsMember({"b", "c", "d", "e"}));
    add_common(np, opt);
    np->callback([&] {
        GradedRing S = graded_input_from_json(load_json_file(in_path), opt.caps());
        auto d = search_np_datum(S, flavor[0], opt.caps());
        Json r{{"flavor", flavor}, {"found", d.has_value()}};
        if (d) r["datum"] = datum_to_json(*d);
        report = r;
    });

    auto* harness = app.add_subcommand(
        "harness", "Datum searches next to the brute-force verdict");
    harness->add_option("--in", in_path, "graded ring or construction file")
        ->required();
    add_common(harness, opt);
    harness->callback([&] {
        GradedRing S = graded_input_from_json(load_json_file(in_path), opt.caps());
        report = harness_to_json(main_theorem_harness(S, opt.caps()));
    });

    auto* mt3 = app.add_subcommand("lpa-mt3", "Common-descendant test of a graph");
    mt3->add_option("--in", in_path, "directed graph file")->required();
    add_common(mt3, opt);
    mt3->callback([&] {
        DirectedGraph E = graph_from_json(load_json_file(in_path));
        report = mt3_to_json(E, satisfies_mt3(E));
    });

    auto* lpa = app.add_subcommand("lpa-prime", "Primeness of a path algebra");
    lpa->add_option("--in", in_path, "directed graph file")->required();
    lpa->add_option("--ring", ring_path, "coefficient ring file");
    lpa->add_option("--ring-prime", ring_prime,
                    "take the coefficient verdict as given: 0 or 1")
        ->check(CLI::IsMember({"0", "1"}));
    add_common(lpa, opt);
    lpa->callback([&] {
        DirectedGraph E = graph_from_json(load_json_file(in_path));
        if (ring_path.empty() == ring_prime.empty())
            throw InputError("bad_arguments",
                             "lpa-prime needs exactly one of --ring and --ring-prime");
        LpaPrimeReport rep =
            ring_path.empty()
                ? lpa_prime_decision(E, ring_prime == "1")
                : lpa_prime_decision(E, ring_from_json(load_json_file(ring_path)),
                                     opt.caps());
        report = lpa_prime_to_json(E, rep);
    });

    auto* gr = app.add_subcommand("groupring-prime",
                                  "Primeness of a group ring over any group");
    gr->add_option("--ring", ring_path, "coefficient ring file")->required();
    gr->add_option("--group", group_expr,
                   "group expression, e.g. \"C2\", \"Z^2\", \"F2 x C3\"")
        ->required();
    add_common(gr, opt);
    gr->callback([&] {
        FiniteRing R = ring_from_json(load_json_file(ring_path));
        report = connell_to_json(
            connell_decision(R, parse_symbolic_group(group_expr), opt.caps()));
    });

    auto* corpus = app.add_subcommand(
        "corpus", "Generate a deterministic corpus with analysis summary");
    corpus->add_option("--out", out_dir, "output directory")->required();
    corpus->add_option("--seed", seed, "generator seed");
    corpus->add_option("--count", count, "number of cases to draw");
    add_common(corpus, opt);
    corpus->callback([&] {
        Json summary = generate_corpus(seed, count, out_dir, opt.caps());
        report = Json{{"cases", summary["cases"].size()},
                      {"count", count},
                      {"out", out_dir},
                      {"seed", seed},
                      {"skipped", summary["skipped"].size()}};
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const CapExceeded& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const TheoremViolation& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (report) emit(*report, opt);
    return 0;
}
