#pragma once

// JSON encodings of the library's types. Parsers throw ValidationError with
// a JSON pointer to the offending value.

#include <optional>
#include <string>

#include <json.hpp>

#include "surfcob/decide.hpp"
#include "surfcob/diagrams.hpp"
#include "surfcob/homology.hpp"

namespace surfcob::json_io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Checks "schema_version" when present.
void check_schema_version(const json& doc);

/// Integers may be JSON numbers or decimal strings (for values beyond 64 bits).
Integer parse_integer(const json& j, const std::string& path);
std::int64_t parse_int64(const json& j, const std::string& path);
json integer_to_json(const Integer& v);

/// Dense [[...],...] or sparse {"rows":r,"cols":c,"entries":[[i,j,v],...]}.
IntMatrix parse_matrix(const json& j, const std::string& path);
json matrix_to_json(const IntMatrix& m);

/// {"free_rank":n,"invariant_factors":[...]} or {"f2_dimension":n}.
AbelianGroup parse_group(const json& j, const std::string& path);
/// f2_dimension is added for groups computed with F2 coefficients.
json group_to_json(const AbelianGroup& g, bool f2_coefficients = false);

/// {"ring":"Z"|"F2","boundary_maps":{"2":matrix,...},"dims":{"2":3,...}}.
ChainComplex parse_complex(const json& j, const std::string& path);

/// Coordinates [..] in `group`. When `complex` is given, {"cycle":[..]}
/// is also accepted and classified in degree 2.
HomologyClass parse_class(const json& j, const AbelianGroup& group, const std::string& path,
                          const ChainComplex* complex = nullptr);
json class_to_json(const HomologyClass& c);

AmbientSpec parse_ambient(const json& j, const std::string& path);
SurfaceSpec parse_surface(const json& j, const AmbientSpec& x, const std::string& path);
Query parse_query(const json& doc);

DoublePointDiagram parse_diagram(const json& j, const std::string& path);
json diagram_to_json(const DoublePointDiagram& d);
/// {"p1":{"C":1,"D":-1},...}, total over points and components.
SignTable parse_signs(const json& j, const DoublePointDiagram& d, const std::string& path);
json signs_to_json(const DoublePointDiagram& d, const SignTable& eps);
json move_to_json(const Move& m, const DoublePointDiagram& before);
json trace_to_json(const MoveTrace& t, const DoublePointDiagram& initial, const std::optional<SignTable>& signs);
MoveTrace parse_trace(const json& j, const DoublePointDiagram& initial, const std::optional<SignTable>& signs,
                      const std::string& path);
std::string hash_to_string(std::uint64_t h);

}  // namespace surfcob::json_io
