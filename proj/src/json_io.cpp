#include "gplab/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace gplab {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw InputError("bad_json", msg); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) bad(std::string("expected an object holding ") + key);
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing key ") + key);
    return *it;
}

int64_t as_int(const Json& j, const char* what) {
    if (!j.is_number_integer())
        bad(std::string(what) + " must be an integer (floats are not accepted)");
    return j.get<int64_t>();
}

uint32_t as_u32(const Json& j, const char* what) {
    int64_t v = as_int(j, what);
    if (v < 0 || v > static_cast<int64_t>(std::numeric_limits<uint32_t>::max()))
        bad(std::string(what) + " out of range");
    return static_cast<uint32_t>(v);
}

std::string as_str(const Json& j, const char* what) {
    if (!j.is_string()) bad(std::string(what) + " must be a string");
    return j.get<std::string>();
}

const Json& as_arr(const Json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    return j;
}

Vec vec_from_json(const Json& j, const char* what) {
    Vec v;
    for (const Json& e : as_arr(j, what)) v.push_back(as_u32(e, what));
    return v;
}

Mat mat_from_json(const Json& j, const char* what) {
    Mat m;
    for (const Json& row : as_arr(j, what)) m.push_back(vec_from_json(row, what));
    return m;
}

Deg deg_from_json(const GradeGroup& G, const Json& j) {
    Deg d;
    if (G.finite()) {
        d = Deg{static_cast<int64_t>(as_u32(j, "degree"))};
    } else if (j.is_number_integer() && G.lattice_rank() == 1) {
        d = Deg{as_int(j, "degree")};
    } else {
        for (const Json& e : as_arr(j, "degree")) d.push_back(as_int(e, "degree"));
    }
    G.validate(d);
    return d;
}

Json deg_to_json(const GradeGroup& G, const Deg& d) {
    if (G.finite()) return Json(d.at(0));
    return Json(d);
}

}  // namespace

Json parse_json_text(const std::string& text) {
    try {
        Json j = Json::parse(text);
        return j;
    } catch (const Json::exception& e) {
        bad(e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("io_error", "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str());
}

std::string dump_canonical(const Json& j) { return j.dump(1) + "\n"; }

void write_file_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("io_error", "cannot write " + tmp);
        out << text;
        if (!out.good()) throw InputError("io_error", "short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw InputError("io_error", "cannot move " + tmp + " into place");
}

FiniteGroup finite_group_from_json(const Json& j) {
    // A bare string is shorthand for the symbolic form.
    if (j.is_string())
        return symbolic_to_table(parse_symbolic_group(j.get<std::string>()));
    std::string kind = as_str(field(j, "kind"), "kind");
    if (kind == "finite") {
        std::vector<std::vector<uint32_t>> table;
        for (const Json& row : as_arr(field(j, "table"), "table")) {
            table.emplace_back();
            for (const Json& e : as_arr(row, "table row")) table.back().push_back(as_u32(e, "table entry"));
        }
        std::vector<std::string> labels;
        if (j.contains("labels"))
            for (const Json& e : as_arr(j.at("labels"), "labels"))
                labels.push_back(as_str(e, "label"));
        return make_group(std::move(table), std::move(labels));
    }
    if (kind == "symbolic")
        return symbolic_to_table(parse_symbolic_group(as_str(field(j, "expr"), "expr")));
    bad("kind must be \"finite\" or \"symbolic\"");
}

SymbolicGroup group_from_json(const Json& j) {
    if (j.is_string()) return parse_symbolic_group(j.get<std::string>());
    std::string kind = as_str(field(j, "kind"), "kind");
    if (kind == "symbolic")
        return parse_symbolic_group(as_str(field(j, "expr"), "expr"));
    if (kind == "finite") {
        SymFiniteTable t;
        t.group = std::make_shared<FiniteGroup>(finite_group_from_json(j));
        return SymbolicGroup{t};
    }
    bad("kind must be \"finite\" or \"symbolic\"");
}

Json group_to_json(const FiniteGroup& G) {
    Json j;
    j["kind"] = "finite";
    j["table"] = G.table;
    j["labels"] = G.labels;
    return j;
}

GradeGroup grade_group_from_symbolic(const SymbolicGroup& g) {
    if (const auto* lat = std::get_if<SymIntegerLattice>(&g.node))
        return lattice_grade_group(lat->rank);
    if (symbolic_predicates(g).is_finite)
        return finite_grade_group(symbolic_to_table(g));
    bad("grade group must be finite or a pure integer lattice");
}

GradeGroup grade_group_from_json(const Json& j) {
    return grade_group_from_symbolic(group_from_json(j));
}

Json grade_group_to_json(const GradeGroup& G) {
    if (G.finite()) return group_to_json(G.group());
    Json j;
    j["kind"] = "symbolic";
    j["expr"] = G.lattice_rank() == 1 ? "Z" : "Z^" + std::to_string(G.lattice_rank());
    return j;
}

FiniteRing ring_from_json(const Json& j) {
    if (j.is_object() && j.contains("preset")) {
        std::string p = as_str(j.at("preset"), "preset");
        if (p == "Zmod") return zmod_ring(as_u32(field(j, "m"), "m"));
        if (p == "MatrixRing")
            return matrix_ring(ring_from_json(field(j, "base")), as_u32(field(j, "n"), "n"));
        if (p == "DirectSum") {
            std::vector<FiniteRing> parts;
            for (const Json& e : as_arr(field(j, "parts"), "parts"))
                parts.push_back(ring_from_json(e));
            return direct_sum_ring(parts);
        }
        bad("unknown preset " + p);
    }
    uint32_t m = as_u32(field(j, "modulus"), "modulus");
    uint32_t k = as_u32(field(j, "rank"), "rank");
    const Json& mul = as_arr(field(j, "mul"), "mul");
    if (mul.size() != k) bad("mul must have one row block per basis vector");
    std::vector<Vec> table;
    for (const Json& row : mul) {
        if (!row.is_array() || row.size() != k) bad("mul row blocks must have rank entries");
        for (const Json& cell : row) table.push_back(vec_from_json(cell, "mul entry"));
    }
    std::vector<std::string> labels;
    if (j.contains("labels"))
        for (const Json& e : as_arr(j.at("labels"), "labels"))
            labels.push_back(as_str(e, "label"));
    std::optional<Vec> unit;
    if (j.contains("unit")) unit = vec_from_json(j.at("unit"), "unit");
    return make_ring(m, k, std::move(table), std::move(labels), unit);
}

Json ring_to_json(const FiniteRing& R) {
    Json mul = Json::array();
    for (uint32_t i = 0; i < R.rank; ++i) {
        Json row = Json::array();
        for (uint32_t l = 0; l < R.rank; ++l) row.push_back(R.basis_product(i, l));
        mul.push_back(std::move(row));
    }
    Json j;
    j["modulus"] = R.modulus;
    j["rank"] = R.rank;
    j["labels"] = R.labels;
    j["mul"] = std::move(mul);
    if (R.unit) j["unit"] = *R.unit;
    return j;
}

GradedRing graded_from_json(const Json& j) {
    FiniteRing R = ring_from_json(field(j, "ring"));
    GradeGroup G = grade_group_from_json(field(j, "group"));
    std::vector<Deg> degrees;
    for (const Json& e : as_arr(field(j, "degrees"), "degrees"))
        degrees.push_back(deg_from_json(G, e));
    if (degrees.size() != R.rank) bad("degrees must list one entry per basis vector");
    return make_graded_ring(std::move(R), std::move(G), std::move(degrees));
}

Json graded_to_json(const GradedRing& S) {
    Json j;
    j["ring"] = ring_to_json(S.ring);
    j["group"] = grade_group_to_json(S.group);
    Json degs = Json::array();
    for (const Deg& d : S.degrees) degs.push_back(deg_to_json(S.group, d));
    j["degrees"] = std::move(degs);
    return j;
}

GradedRing construction_from_json(const Json& j, const Caps& caps) {
    std::string c = as_str(field(j, "construct"), "construct");
    FiniteRing R = ring_from_json(field(j, "ring"));
    if (c == "group_ring")
        return build_group_ring(R, finite_group_from_json(field(j, "group")), caps);
    if (c == "skew") {
        FiniteGroup G = finite_group_from_json(field(j, "group"));
        SkewAction act;
        for (const Json& e : as_arr(field(j, "action"), "action"))
            act.maps.push_back(mat_from_json(e, "action map"));
        return build_skew_group_ring(R, G, act, caps);
    }
    if (c == "partial_skew" || c == "partial_crossed") {
        GradeGroup G = grade_group_from_json(field(j, "group"));
        PartialActionData data;
        for (const Json& e : as_arr(field(j, "ideals"), "ideals")) {
            Deg d = deg_from_json(G, field(e, "degree"));
            data.ideals[d] = ideal_from_gens(R, mat_from_json(field(e, "gens"), "gens"));
        }
        for (const Json& e : as_arr(field(j, "maps"), "maps")) {
            Deg d = deg_from_json(G, field(e, "degree"));
            data.maps[d] = mat_from_json(field(e, "map"), "map");
        }
        if (c == "partial_skew")
            return build_partial_skew_group_ring(R, G, data, caps);
        TwistedPartialData tw;
        tw.base = std::move(data);
        for (const Json& e : as_arr(field(j, "units"), "units")) {
            Deg d = deg_from_json(G, field(e, "degree"));
            tw.units[d] = vec_from_json(field(e, "value"), "unit value");
        }
        if (j.contains("twists"))
            for (const Json& e : as_arr(j.at("twists"), "twists")) {
                Deg l = deg_from_json(G, field(e, "left"));
                Deg r = deg_from_json(G, field(e, "right"));
                tw.twists[{l, r}] = vec_from_json(field(e, "value"), "twist value");
            }
        return build_partial_crossed_product(R, G, tw, caps);
    }
    if (c == "matrix") {
        uint32_t n = as_u32(field(j, "n"), "n");
        std::string mode = as_str(field(j, "mode"), "mode");
        if (mode == "integer") return build_matrix_graded(R, n, MatrixGradeMode::Integer, caps);
        if (mode == "modn") return build_matrix_graded(R, n, MatrixGradeMode::IntegerModN, caps);
        bad("mode must be \"integer\" or \"modn\"");
    }
    bad("unknown construct " + c);
}

GradedRing graded_input_from_json(const Json& j, const Caps& caps) {
    if (j.is_object() && j.contains("construct")) return construction_from_json(j, caps);
    return graded_from_json(j);
}

DirectedGraph graph_from_json(const Json& j) {
    std::vector<std::string> vertices;
    for (const Json& e : as_arr(field(j, "vertices"), "vertices"))
        vertices.push_back(as_str(e, "vertex"));
    auto index_of = [&](const std::string& name, const char* what) -> uint32_t {
        for (uint32_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == name) return i;
        bad(std::string(what) + " names unknown vertex " + name);
    };
    std::vector<DirectedGraph::Edge> edges;
    if (j.contains("edges"))
        for (const Json& e : as_arr(j.at("edges"), "edges")) {
            DirectedGraph::Edge ed;
            ed.name = as_str(field(e, "name"), "edge name");
            ed.src = index_of(as_str(field(e, "src"), "src"), "src");
            ed.dst = index_of(as_str(field(e, "dst"), "dst"), "dst");
            edges.push_back(std::move(ed));
        }
    std::vector<uint32_t> emitters;
    if (j.contains("infinite_emitters"))
        for (const Json& e : as_arr(j.at("infinite_emitters"), "infinite_emitters"))
            emitters.push_back(index_of(as_str(e, "infinite_emitters"), "infinite_emitters"));
    return make_graph(std::move(vertices), std::move(edges), std::move(emitters));
}

Json graph_to_json(const DirectedGraph& E) {
    Json j;
    j["vertices"] = E.vertices;
    Json edges = Json::array();
    for (const auto& e : E.edges) {
        Json ed;
        ed["name"] = e.name;
        ed["src"] = E.vertices.at(e.src);
        ed["dst"] = E.vertices.at(e.dst);
        edges.push_back(std::move(ed));
    }
    j["edges"] = std::move(edges);
    Json em = Json::array();
    for (uint32_t v : E.infinite_emitters) em.push_back(E.vertices.at(v));
    j["infinite_emitters"] = std::move(em);
    return j;
}

Json flags_to_json(const GradingFlags& f) {
    Json j;
    j["strong"] = f.strong;
    j["epsilon_strong"] = f.epsilon_strong;
    j["nearly_epsilon_strong"] = f.nearly_epsilon_strong;
    j["symmetric"] = f.symmetric;
    j["non_degenerate"] = f.non_degenerate;
    j["ring_s_unital"] = f.ring_s_unital;
    j["principal_s_unital"] = f.principal_s_unital;
    return j;
}

Json datum_to_json(const NPDatum& d) {
    Json j;
    j["H"] = d.H.elems;
    j["N"] = d.N.elems;
    j["I_gens"] = d.I.rows;
    j["A_gens"] = d.A_tilde.rows;
    j["B_gens"] = d.B_tilde.rows;
    return j;
}

Json certificate_to_json(const PrimenessReport& rep) {
    Json j;
    j["verdict"] = rep.prime ? "prime" : "not_prime";
    j["method"] = rep.method;
    j["criterion"] = rep.criterion;
    Json bounds;
    bounds["scanned"] = rep.scanned;
    j["bounds"] = std::move(bounds);
    if (rep.cross_check) j["cross_check"] = *rep.cross_check;
    if (rep.datum) j["np_datum"] = datum_to_json(*rep.datum);
    if (rep.witness_a && rep.witness_b) {
        Json w;
        w["a"] = *rep.witness_a;
        w["b"] = *rep.witness_b;
        j["witness"] = std::move(w);
    }
    return j;
}

Json harness_to_json(const HarnessReport& h) {
    Json j;
    j["not_prime"] = h.not_prime;
    j["exists_b"] = h.exists_b;
    j["exists_c"] = h.exists_c;
    j["exists_d"] = h.exists_d;
    j["exists_e"] = h.exists_e;
    j["non_degenerate"] = h.non_degenerate;
    j["nearly_epsilon_strong"] = h.nearly_epsilon_strong;
    j["observations"] = h.observations;
    return j;
}

Json mt3_to_json(const DirectedGraph& E, const Mt3Report& rep) {
    Json j;
    j["mt3"] = rep.holds;
    if (rep.witness)
        j["witness"] = Json::array(
            {E.vertices.at(rep.witness->first), E.vertices.at(rep.witness->second)});
    return j;
}

Json lpa_prime_to_json(const DirectedGraph& E, const LpaPrimeReport& rep) {
    Json j;
    j["verdict"] = rep.prime ? "prime" : "not_prime";
    j["ring_prime"] = rep.ring_prime;
    j["mt3"] = rep.mt3;
    if (rep.witness)
        j["witness"] = Json::array(
            {E.vertices.at(rep.witness->first), E.vertices.at(rep.witness->second)});
    if (rep.cross_check) j["cross_check"] = certificate_to_json(*rep.cross_check);
    return j;
}

Json connell_to_json(const ConnellReport& rep) {
    Json j;
    j["verdict"] = rep.prime ? "prime" : "not_prime";
    j["ring_prime"] = rep.ring_prime;
    j["group_obstruction"] = rep.group_obstruction;
    if (!rep.prime)
        j["reason"] = rep.group_obstruction ? "finite_normal_subgroup" : "ring_not_prime";
    if (rep.cross_check) j["cross_check"] = certificate_to_json(*rep.cross_check);
    return j;
}

}  // namespace gplab
