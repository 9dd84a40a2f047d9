#include "surfcob/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "surfcob/decide.hpp"
#include "surfcob/diagrams.hpp"
#include "surfcob/errors.hpp"
#include "surfcob/json_io.hpp"

namespace surfcob::cli {

namespace {

using nlohmann::json;

std::string emit(const json& j) { return j.dump() + "\n"; }

json error_json(const std::string& kind, const std::string& path, const std::string& message) {
  return {{"error", {{"kind", kind}, {"path", path}, {"message", message}}}};
}

std::optional<std::string_view> bundled(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.extension() != ".json") return std::nullopt;
  const std::string stem = p.stem().string();
  for (const auto& [name, content] : bundled_fixtures())
    if (name == stem) return content;
  return std::nullopt;
}

// Reads a file, "-" for stdin, or falls back to a bundled fixture of the same name.
json load(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    text = os.str();
  } else if (std::ifstream in(path); in) {
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  } else if (auto b = bundled(path)) {
    text = std::string(*b);
  } else {
    throw ValidationError("io", "cannot read '" + path + "'");
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("json_parse", e.what());
  }
}

void allow_keys(const json& doc, std::initializer_list<const char*> keys) {
  if (!doc.is_object()) throw ValidationError("schema", "document must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ValidationError("schema", "unexpected field '" + k + "'", "/" + k);
  }
}

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError("schema", std::string("missing required field '") + key + "'", std::string("/") + key);
  return *it;
}

struct DiagramInput {
  DoublePointDiagram diagram;
  std::optional<SignTable> signs;
};

DiagramInput parse_diagram_doc(const json& doc) {
  json_io::check_schema_version(doc);
  allow_keys(doc, {"schema_version", "diagram", "signs", "expect", "description"});
  DiagramInput in;
  in.diagram = json_io::parse_diagram(field(doc, "diagram"), "/diagram");
  if (doc.contains("signs") && !doc["signs"].is_null()) in.signs = json_io::parse_signs(doc["signs"], in.diagram, "/signs");
  return in;
}

struct HomologyInput {
  ChainComplex complex;
  int degree = 0;
  std::optional<std::vector<Integer>> cycle;
};

HomologyInput parse_homology_doc(const json& doc, std::optional<int> degree_flag) {
  json_io::check_schema_version(doc);
  allow_keys(doc, {"schema_version", "complex", "degree", "cycle", "expect", "description"});
  HomologyInput in;
  in.complex = json_io::parse_complex(field(doc, "complex"), "/complex");
  if (degree_flag)
    in.degree = *degree_flag;
  else
    in.degree = static_cast<int>(json_io::parse_int64(field(doc, "degree"), "/degree"));
  if (doc.contains("cycle")) {
    std::vector<Integer> z;
    const auto& arr = doc["cycle"];
    if (!arr.is_array()) throw ValidationError("schema", "expected an array", "/cycle");
    for (std::size_t k = 0; k < arr.size(); ++k) z.push_back(json_io::parse_integer(arr[k], "/cycle/" + std::to_string(k)));
    in.cycle = std::move(z);
  }
  return in;
}

std::string document_kind(const json& doc) {
  if (!doc.is_object()) throw ValidationError("schema", "document must be a JSON object");
  if (doc.contains("question")) return "query";
  if (doc.contains("complex")) return "homology";
  if (doc.contains("diagram")) return "diagram";
  throw ValidationError("schema", "document is neither a query, a homology request nor a diagram");
}

json cmd_decide(const std::string& file) { return answer(json_io::parse_query(load(file))); }

json cmd_homology(const std::string& file, std::optional<int> degree) {
  const auto in = parse_homology_doc(load(file), degree);
  json out = json_io::group_to_json(homology_of_complex(in.complex, in.degree), in.complex.ring == Ring::F2);
  if (in.cycle) {
    try {
      out["class"] = json_io::class_to_json(class_of_cycle(in.complex, *in.cycle, in.degree));
    } catch (const ValidationError& e) {
      throw ValidationError(e.kind(), e.what(), "/cycle");
    }
  }
  return out;
}

json cmd_normalize(const std::string& file, bool with_trace) {
  const auto in = parse_diagram_doc(load(file));
  const auto outcome = normalize(in.diagram, in.signs);
  if (const auto* bad = std::get_if<NormalizeInfeasible>(&outcome))
    return {{"status", "infeasible"}, {"obstructions", bad->obstructions}};
  const auto& ok = std::get<NormalizeSuccess>(outcome);
  const auto replayed = replay(in.diagram, in.signs, ok.trace);
  if (!(replayed.diagram == ok.diagram) || !(replayed.signs == ok.signs))
    throw InternalError("trace replay does not reproduce the normalized diagram");
  json out;
  out["status"] = "normalized";
  out["assignment"] = ok.assignment;
  out["diagram"] = json_io::diagram_to_json(ok.diagram);
  out["signs"] = json_io::signs_to_json(ok.diagram, ok.signs);
  out["moves"] = ok.trace.move_count();
  out["final_hash"] = json_io::hash_to_string(state_hash(ok.diagram, ok.signs));
  if (with_trace) out["trace"] = json_io::trace_to_json(ok.trace, in.diagram, in.signs);
  return out;
}

json cmd_oracle(const std::string& file) {
  const auto in = parse_diagram_doc(load(file));
  const auto found = oracle_assign(in.diagram);
  return {{"assignment", found ? json(*found) : json(nullptr)}};
}

json cmd_validate(const std::string& file) {
  const json doc = load(file);
  const std::string kind = document_kind(doc);
  if (kind == "query")
    json_io::parse_query(doc);
  else if (kind == "homology")
    parse_homology_doc(doc, std::nullopt);
  else
    parse_diagram_doc(doc);
  return {{"valid", true}, {"kind", kind}};
}

json cmd_fixtures(const std::string& name, std::optional<std::size_t> random_count, std::uint64_t seed) {
  if (random_count) {
    std::mt19937_64 rng(seed);
    json list = json::array();
    for (std::size_t k = 0; k < *random_count; ++k) list.push_back(json_io::diagram_to_json(random_diagram(rng)));
    return {{"seed", seed}, {"diagrams", std::move(list)}};
  }
  if (!name.empty()) {
    for (const auto& [n, content] : bundled_fixtures())
      if (n == name) return json::parse(content);
    throw ValidationError("unknown_fixture", "no bundled fixture named '" + name + "'");
  }
  json list = json::array();
  for (const auto& [n, content] : bundled_fixtures())
    list.push_back({{"name", std::string(n)}, {"kind", document_kind(json::parse(content))}});
  return {{"fixtures", std::move(list)}};
}

}  // namespace

Result run(const std::vector<std::string>& args) {
  CLI::App app{"Decide cobordism and concordance questions for surfaces in 4-manifolds", "surfcob"};
  app.require_subcommand(1);
  std::string file;
  bool with_trace = false;
  std::optional<int> degree;
  std::string fixture_name;
  std::optional<std::size_t> random_count;
  std::uint64_t seed = 1;

  auto* decide = app.add_subcommand("decide", "Answer a query file");
  decide->add_option("file", file, "Query JSON ('-' for stdin)")->required();
  auto* homology = app.add_subcommand("homology", "Homology of a chain complex");
  homology->add_option("file", file, "Homology request JSON")->required();
  homology->add_option("--degree", degree, "Degree (overrides the file)");
  auto* norm = app.add_subcommand("diagram-normalize", "Normalize a double point diagram");
  norm->add_option("file", file, "Diagram JSON")->required();
  norm->add_flag("--trace", with_trace, "Include the move trace");
  auto* oracle = app.add_subcommand("diagram-oracle", "Exhaustive uniform sign search");
  oracle->add_option("file", file, "Diagram JSON")->required();
  auto* validate = app.add_subcommand("validate", "Validate any input document");
  validate->add_option("file", file, "Input JSON")->required();
  auto* fixtures = app.add_subcommand("fixtures", "List or print bundled fixtures");
  fixtures->add_option("--name", fixture_name, "Print one fixture");
  fixtures->add_option("--random-diagrams", random_count, "Emit N seeded random diagrams");
  fixtures->add_option("--seed", seed, "Seed for --random-diagrams");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return {kOk, emit({{"help", app.help()}})};
  } catch (const CLI::ParseError& e) {
    return {kValidation, emit(error_json("usage", "", e.what()))};
  }

  try {
    json out;
    if (*decide)
      out = cmd_decide(file);
    else if (*homology)
      out = cmd_homology(file, degree);
    else if (*norm)
      out = cmd_normalize(file, with_trace);
    else if (*oracle)
      out = cmd_oracle(file);
    else if (*validate)
      out = cmd_validate(file);
    else
      out = cmd_fixtures(fixture_name, random_count, seed);
    return {kOk, emit(out)};
  } catch (const ValidationError& e) {
    return {kValidation, emit(error_json(e.kind(), e.path(), e.what()))};
  } catch (const InternalError& e) {
    return {kInternal, emit(error_json(e.kind(), "", e.what()))};
  } catch (const std::exception& e) {
    return {kInternal, emit(error_json("internal", "", e.what()))};
  }
}

}  // namespace surfcob::cli
