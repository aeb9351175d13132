#ifndef GPLAB_JSON_IO_HPP
#define GPLAB_JSON_IO_HPP

#include <string>

#include "json.hpp"

#include "gplab/constructions.hpp"
#include "gplab/graded.hpp"
#include "gplab/groups.hpp"
#include "gplab/lpa.hpp"
#include "gplab/modring.hpp"
#include "gplab/primality.hpp"

namespace gplab {

// Single interchange format of the tool: UTF-8 JSON, keys in sorted order,
// integers only.  Every parser here rejects floats and wraps any structural
// problem in an input error with code "bad_json" naming the offending key;
// semantic validation stays with the owning builders.

using Json = nlohmann::json;

Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);

// Sorted keys, fixed indentation, trailing newline; byte-stable.
std::string dump_canonical(const Json& j);

// Write-to-temporary-then-rename so partially written files never appear.
void write_file_atomic(const std::string& path, const std::string& text);

// {"kind":"finite","table":...,"labels":...} or {"kind":"symbolic","expr":...}
SymbolicGroup group_from_json(const Json& j);
FiniteGroup finite_group_from_json(const Json& j);
Json group_to_json(const FiniteGroup& G);

// Finite tables and pure integer lattices carry gradings; anything else in
// the symbolic catalog is rejected here.
GradeGroup grade_group_from_symbolic(const SymbolicGroup& g);
GradeGroup grade_group_from_json(const Json& j);
Json grade_group_to_json(const GradeGroup& G);

// {"modulus","rank","mul","labels"?,"unit"?} or {"preset": "Zmod"|"MatrixRing"|"DirectSum", ...}
FiniteRing ring_from_json(const Json& j);
Json ring_to_json(const FiniteRing& R);

// {"ring":...,"group":...,"degrees":[...]}; a degree is an element index for
// finite groups and a coordinate array for lattices.
GradedRing graded_from_json(const Json& j);
Json graded_to_json(const GradedRing& S);

// {"construct":"group_ring"|"skew"|"partial_skew"|"partial_crossed"|"matrix", ...}
GradedRing construction_from_json(const Json& j, const Caps& caps = {});

// Dispatch: construction object when a "construct" key is present, plain
// graded-ring object otherwise.
GradedRing graded_input_from_json(const Json& j, const Caps& caps = {});

// {"vertices":[names],"edges":[{"name","src","dst"}],"infinite_emitters":[names]}
// with endpoints given by vertex name.
DirectedGraph graph_from_json(const Json& j);
Json graph_to_json(const DirectedGraph& E);

// Report emitters.  Keys holding optional evidence are present only when
// the evidence is.
Json flags_to_json(const GradingFlags& f);
Json datum_to_json(const NPDatum& d);
Json certificate_to_json(const PrimenessReport& rep);
Json harness_to_json(const HarnessReport& h);
Json mt3_to_json(const DirectedGraph& E, const Mt3Report& rep);
Json lpa_prime_to_json(const DirectedGraph& E, const LpaPrimeReport& rep);
Json connell_to_json(const ConnellReport& rep);

}  // namespace gplab

#endif
