#include "surfcob/json_io.hpp"

#include <cstdio>
#include <limits>
#include <set>

#include "surfcob/errors.hpp"

namespace surfcob::json_io {

namespace {

ValidationError schema_error(const std::string& path, const std::string& what) {
  return ValidationError("schema", what, path);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw schema_error(child(path, key), "missing required field '" + key + "'");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw schema_error(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  if (!obj.is_object()) throw schema_error(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw schema_error(child(path, k), "unexpected field '" + k + "'");
  }
}

bool parse_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw schema_error(path, "expected a boolean");
  return j.get<bool>();
}

std::string parse_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw schema_error(path, "expected a string");
  return j.get<std::string>();
}

const json& parse_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw schema_error(path, "expected an array");
  return j;
}

std::vector<std::string> parse_string_list(const json& j, const std::string& path) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < parse_array(j, path).size(); ++k) out.push_back(parse_string(j[k], child(path, k)));
  return out;
}

std::size_t parse_count(const json& j, const std::string& path) {
  const std::int64_t v = parse_int64(j, path);
  if (v < 0) throw schema_error(path, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    if (!e.path().empty()) throw;
    throw ValidationError(e.kind(), e.what(), path);
  }
}

LinkAmbient parse_link_ambient(const json& j, const std::string& path) {
  const std::string s = parse_string(j, path);
  if (s == "S3") return LinkAmbient::S3;
  if (s == "generic") return LinkAmbient::Generic;
  throw schema_error(path, "link ambient is \"S3\" or \"generic\"");
}

Framing parse_offsets(const json& j, const Link& link, const std::string& path) {
  if (!j.is_object()) throw schema_error(path, "expected an object of framing offsets");
  std::map<std::string, std::int64_t> offsets;
  for (const auto& [k, v] : j.items()) offsets[k] = parse_int64(v, child(path, k));
  return at_path(path, [&] { return Framing(link, std::move(offsets)); });
}

}  // namespace

void check_schema_version(const json& doc) {
  if (!doc.is_object()) throw schema_error("", "document must be a JSON object");
  auto it = doc.find("schema_version");
  if (it == doc.end()) return;
  if (!it->is_string() || it->get<std::string>() != kSchemaVersion)
    throw ValidationError("schema_version", "unsupported schema_version; expected \"" + std::string(kSchemaVersion) + "\"",
                          "/schema_version");
}

Integer parse_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    return Integer(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const std::size_t start = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw schema_error(path, "expected a decimal integer string");
    return Integer(s[0] == '+' ? s.substr(1) : s);
  }
  throw schema_error(path, "expected an integer");
}

std::int64_t parse_int64(const json& j, const std::string& path) {
  const Integer v = parse_integer(j, path);
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw schema_error(path, "integer out of 64-bit range");
  return static_cast<std::int64_t>(v);
}

json integer_to_json(const Integer& v) {
  if (v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min())
    return static_cast<std::int64_t>(v);
  return v.str();
}

IntMatrix parse_matrix(const json& j, const std::string& path) {
  if (j.is_object()) {
    allow_keys(j, {"rows", "cols", "entries"}, path);
    const std::size_t rows = parse_count(require(j, "rows", path), child(path, "rows"));
    const std::size_t cols = parse_count(require(j, "cols", path), child(path, "cols"));
    if (rows > kMaxDenseDimension || cols > kMaxDenseDimension)
      throw ValidationError("too_large", "matrix exceeds " + std::to_string(kMaxDenseDimension) + " in a dimension", path);
    IntMatrix m(rows, cols);
    const auto& entries = parse_array(require(j, "entries", path), child(path, "entries"));
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string p = child(child(path, "entries"), k);
      if (!entries[k].is_array() || entries[k].size() != 3) throw schema_error(p, "sparse entries are [row, col, value]");
      const std::size_t r = parse_count(entries[k][0], child(p, 0));
      const std::size_t c = parse_count(entries[k][1], child(p, 1));
      if (r >= rows || c >= cols) throw schema_error(p, "entry index out of range");
      m(r, c) += parse_integer(entries[k][2], child(p, 2));
    }
    return m;
  }
  const auto& rows = parse_array(j, path);
  const std::size_t cols = rows.empty() ? 0 : parse_array(rows[0], child(path, 0)).size();
  if (rows.size() > kMaxDenseDimension || cols > kMaxDenseDimension)
    throw ValidationError("too_large", "matrix exceeds " + std::to_string(kMaxDenseDimension) + " in a dimension", path);
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = parse_array(rows[r], child(path, r));
    if (row.size() != cols) throw ValidationError("ragged_matrix", "matrix rows have different lengths", child(path, r));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_integer(row[c], child(child(path, r), c));
  }
  return m;
}

json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(integer_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

AbelianGroup parse_group(const json& j, const std::string& path) {
  if (!j.is_object()) throw schema_error(path, "expected a group object");
  if (const json* dim = optional_field(j, "f2_dimension", path)) {
    allow_keys(j, {"f2_dimension"}, path);
    return AbelianGroup::f2(parse_count(*dim, child(path, "f2_dimension")));
  }
  allow_keys(j, {"free_rank", "invariant_factors"}, path);
  const std::size_t free_rank = parse_count(require(j, "free_rank", path), child(path, "free_rank"));
  std::vector<Integer> factors;
  if (const json* f = optional_field(j, "invariant_factors", path))
    for (std::size_t k = 0; k < parse_array(*f, child(path, "invariant_factors")).size(); ++k)
      factors.push_back(parse_integer((*f)[k], child(child(path, "invariant_factors"), k)));
  return at_path(path, [&] { return AbelianGroup(free_rank, std::move(factors)); });
}

json group_to_json(const AbelianGroup& g, bool f2_coefficients) {
  json j;
  j["free_rank"] = g.free_rank();
  json factors = json::array();
  for (const auto& d : g.invariant_factors()) factors.push_back(integer_to_json(d));
  j["invariant_factors"] = std::move(factors);
  if (f2_coefficients) j["f2_dimension"] = g.f2_dimension();
  return j;
}

ChainComplex parse_complex(const json& j, const std::string& path) {
  allow_keys(j, {"ring", "boundary_maps", "dims"}, path);
  ChainComplex c;
  const std::string ring = parse_string(require(j, "ring", path), child(path, "ring"));
  if (ring == "Z")
    c.ring = Ring::Z;
  else if (ring == "F2")
    c.ring = Ring::F2;
  else
    throw schema_error(child(path, "ring"), "ring is \"Z\" or \"F2\"");
  auto degree_of = [&](const std::string& key, const std::string& p) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(key, &used);
      if (used == key.size()) return n;
    } catch (const std::exception&) {
    }
    throw schema_error(p, "degree keys are integers");
  };
  if (const json* maps = optional_field(j, "boundary_maps", path)) {
    if (!maps->is_object()) throw schema_error(child(path, "boundary_maps"), "expected an object keyed by degree");
    for (const auto& [k, v] : maps->items()) {
      const std::string p = child(child(path, "boundary_maps"), k);
      c.boundary[degree_of(k, p)] = parse_matrix(v, p);
    }
  }
  if (const json* dims = optional_field(j, "dims", path)) {
    if (!dims->is_object()) throw schema_error(child(path, "dims"), "expected an object keyed by degree");
    for (const auto& [k, v] : dims->items()) {
      const std::string p = child(child(path, "dims"), k);
      c.dims[degree_of(k, p)] = parse_count(v, p);
    }
  }
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(e.kind(), e.what(), path + e.path());
  }
  return c;
}

HomologyClass parse_class(const json& j, const AbelianGroup& group, const std::string& path, const ChainComplex* complex) {
  if (j.is_object()) {
    allow_keys(j, {"cycle"}, path);
    if (!complex) throw ValidationError("missing_complex", "cycle input needs a chain complex in the ambient", path);
    std::vector<Integer> z;
    const auto& arr = parse_array(require(j, "cycle", path), child(path, "cycle"));
    for (std::size_t k = 0; k < arr.size(); ++k) z.push_back(parse_integer(arr[k], child(child(path, "cycle"), k)));
    return at_path(path, [&] { return class_of_cycle(*complex, z, 2); });
  }
  const auto& arr = parse_array(j, path);
  std::vector<Integer> coords;
  for (std::size_t k = 0; k < arr.size(); ++k) coords.push_back(parse_integer(arr[k], child(path, k)));
  return at_path(path, [&] { return HomologyClass(group, std::move(coords)); });
}

json class_to_json(const HomologyClass& c) {
  json out = json::array();
  for (const auto& v : c.coords()) out.push_back(integer_to_json(v));
  return out;
}

namespace {

// Chain-level ambient input, kept alongside the spec so classes may be given as cycles.
struct AmbientParse {
  AmbientSpec spec;
  std::optional<ChainComplex> rel_z, rel_f2, abs_z, abs_f2;
};

void set_group(std::optional<AbelianGroup>& slot, const AbelianGroup& g, const std::string& path) {
  if (slot && !(*slot == g))
    throw ValidationError("group_mismatch", "declared group disagrees with the group computed from the complex", path);
  slot = g;
}

ChainComplex over_f2(ChainComplex c) {
  c.ring = Ring::F2;
  return c;
}

AmbientParse parse_ambient_full(const json& j, const std::string& path) {
  allow_keys(j, {"orientable", "simply_connected", "boundary_nonempty", "connected", "is_s4", "groups", "reductions",
                 "complexes"},
             path);
  AmbientParse out;
  auto& x = out.spec;
  auto flag = [&](const char* key, bool& slot) {
    if (const json* v = optional_field(j, key, path)) slot = parse_bool(*v, child(path, key));
  };
  flag("orientable", x.orientable);
  flag("simply_connected", x.simply_connected);
  flag("boundary_nonempty", x.boundary_nonempty);
  flag("connected", x.connected);
  flag("is_s4", x.is_s4);
  if (const json* g = optional_field(j, "groups", path)) {
    const std::string p = child(path, "groups");
    allow_keys(*g, {"H2_rel_F2", "H2_F2", "H2_rel_Z", "H2_Z"}, p);
    auto read = [&](const char* key, std::optional<AbelianGroup>& slot) {
      if (const json* v = optional_field(*g, key, p)) slot = parse_group(*v, child(p, key));
    };
    read("H2_rel_F2", x.h2_rel_f2);
    read("H2_F2", x.h2_f2);
    read("H2_rel_Z", x.h2_rel_z);
    read("H2_Z", x.h2_z);
  }
  if (const json* c = optional_field(j, "complexes", path)) {
    const std::string p = child(path, "complexes");
    allow_keys(*c, {"relative", "absolute"}, p);
    auto read = [&](const char* key, std::optional<ChainComplex>& z, std::optional<ChainComplex>& f2,
                    std::optional<AbelianGroup>& gz, std::optional<AbelianGroup>& gf2) {
      const json* v = optional_field(*c, key, p);
      if (!v) return;
      const std::string q = child(p, key);
      z = parse_complex(*v, q);
      if (z->ring != Ring::Z) throw ValidationError("bad_ring", "ambient complexes are given over Z", child(q, "ring"));
      f2 = over_f2(*z);
      set_group(gz, homology_of_complex(*z, 2), q);
      set_group(gf2, homology_of_complex(*f2, 2), q);
    };
    read("relative", out.rel_z, out.rel_f2, x.h2_rel_z, x.h2_rel_f2);
    read("absolute", out.abs_z, out.abs_f2, x.h2_z, x.h2_f2);
    if (out.rel_z) x.reduce_rel = reduction_map(*out.rel_z, 2);
    if (out.abs_z) x.reduce_abs = reduction_map(*out.abs_z, 2);
  }
  if (const json* r = optional_field(j, "reductions", path)) {
    const std::string p = child(path, "reductions");
    allow_keys(*r, {"rel", "abs"}, p);
    auto read = [&](const char* key, const std::optional<AbelianGroup>& src, const std::optional<AbelianGroup>& dst,
                    std::optional<ReductionMap>& slot) {
      const json* v = optional_field(*r, key, p);
      if (!v) return;
      const std::string q = child(p, key);
      if (!src || !dst) throw ValidationError("missing_group", "a reduction map needs both of its groups declared", q);
      IntMatrix m = parse_matrix(*v, q);
      if (m.rows() != dst->coordinate_count() || m.cols() != src->coordinate_count())
        throw ValidationError("dimension_mismatch", "reduction matrix shape does not match its groups", q);
      slot = ReductionMap{*src, *dst, std::move(m)};
    };
    read("rel", x.h2_rel_z, x.h2_rel_f2, x.reduce_rel);
    read("abs", x.h2_z, x.h2_f2, x.reduce_abs);
  }
  at_path(path, [&] {
    x.validate();
    return 0;
  });
  return out;
}

HomologyClass class_in(const json& j, const std::optional<AbelianGroup>& group, const char* group_name,
                       const std::string& path, const std::optional<ChainComplex>& complex) {
  if (!group)
    throw ValidationError("missing_group", std::string("class given but the ambient declares no ") + group_name, path);
  return parse_class(j, *group, path, complex ? &*complex : nullptr);
}

SurfaceSpec parse_surface_full(const json& j, const AmbientParse& ap, const std::string& path) {
  allow_keys(j, {"id", "components", "boundary_ambient", "class_mod2", "class_int", "self_count", "embedded"}, path);
  SurfaceSpec s;
  s.id = parse_string(require(j, "id", path), child(path, "id"));
  if (const json* a = optional_field(j, "boundary_ambient", path))
    s.boundary_ambient = parse_link_ambient(*a, child(path, "boundary_ambient"));
  const std::string cp = child(path, "components");
  const auto& comps = parse_array(require(j, "components", path), cp);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const std::string p = child(cp, k);
    const json& cj = comps[k];
    allow_keys(cj, {"id", "orientable", "euler_characteristic", "boundary", "euler", "rel_euler"}, p);
    ComponentSpec c;
    c.id = parse_string(require(cj, "id", p), child(p, "id"));
    c.orientable = parse_bool(require(cj, "orientable", p), child(p, "orientable"));
    c.euler_characteristic = parse_int64(require(cj, "euler_characteristic", p), child(p, "euler_characteristic"));
    if (const json* b = optional_field(cj, "boundary", p)) c.boundary = parse_string_list(*b, child(p, "boundary"));
    if (const json* e = optional_field(cj, "euler", p)) c.euler = parse_int64(*e, child(p, "euler"));
    if (const json* r = optional_field(cj, "rel_euler", p)) {
      const std::string rp = child(p, "rel_euler");
      allow_keys(*r, {"base_framing", "e_base"}, rp);
      const Link link = at_path(rp, [&] { return Link(c.boundary, s.boundary_ambient); });
      c.rel_euler = RelEulerDatum{s.id, parse_offsets(require(*r, "base_framing", rp), link, child(rp, "base_framing")),
                                  parse_int64(require(*r, "e_base", rp), child(rp, "e_base"))};
    }
    at_path(p, [&] {
      c.validate();
      return 0;
    });
    s.components.push_back(std::move(c));
  }
  if (const json* c = optional_field(j, "class_mod2", path))
    s.class_mod2 = class_in(*c, ap.spec.h2_rel_f2, "H2_rel_F2", child(path, "class_mod2"), ap.rel_f2);
  if (const json* c = optional_field(j, "class_int", path))
    s.class_int = class_in(*c, ap.spec.h2_rel_z, "H2_rel_Z", child(path, "class_int"), ap.rel_z);
  if (const json* v = optional_field(j, "self_count", path)) s.self_count = parse_int64(*v, child(path, "self_count"));
  if (const json* v = optional_field(j, "embedded", path)) s.embedded = parse_bool(*v, child(path, "embedded"));
  else s.embedded = s.self_count == 0;
  at_path(path, [&] {
    s.validate();
    return 0;
  });
  return s;
}

}  // namespace

AmbientSpec parse_ambient(const json& j, const std::string& path) { return parse_ambient_full(j, path).spec; }

SurfaceSpec parse_surface(const json& j, const AmbientSpec& x, const std::string& path) {
  AmbientParse ap;
  ap.spec = x;
  return parse_surface_full(j, ap, path);
}

Query parse_query(const json& doc) {
  check_schema_version(doc);
  allow_keys(doc, {"schema_version", "question", "ambient", "surfaces", "z", "union_mod2", "union_int", "expect",
                   "description"},
             "");
  Query q;
  q.question = at_path("/question", [&] { return question_from_string(parse_string(require(doc, "question", ""), "/question")); });
  const AmbientParse ap = parse_ambient_full(require(doc, "ambient", ""), "/ambient");
  q.ambient = ap.spec;
  const auto& surfaces = parse_array(require(doc, "surfaces", ""), "/surfaces");
  for (std::size_t k = 0; k < surfaces.size(); ++k)
    q.surfaces.push_back(parse_surface_full(surfaces[k], ap, child("/surfaces", k)));
  if (const json* u = optional_field(doc, "union_mod2", ""))
    q.union_mod2 = class_in(*u, ap.spec.h2_f2, "H2_F2", "/union_mod2", ap.abs_f2);
  if (const json* u = optional_field(doc, "union_int", "")) {
    const auto& arr = parse_array(*u, "/union_int");
    for (std::size_t k = 0; k < arr.size(); ++k)
      q.union_int.push_back(class_in(arr[k], ap.spec.h2_z, "H2_Z", child("/union_int", k), ap.abs_z));
  }
  if (const json* z = optional_field(doc, "z", "")) {
    const std::string p = "/z";
    allow_keys(*z, {"from_link", "to_link", "link_ambient", "from_framing", "to_framing", "e_z", "class_mod2", "class_int",
                    "is_concordance", "component_euler", "e_a", "e_b"},
               p);
    std::optional<HomologyClass> class_mod2;
    if (const json* c = optional_field(*z, "class_mod2", p))
      class_mod2 = class_in(*c, ap.spec.h2_f2, "H2_F2", child(p, "class_mod2"), ap.abs_f2);
    if (optional_field(*z, "from_link", p) || optional_field(*z, "to_link", p)) {
      BoundaryCobordismSpec b;
      LinkAmbient amb = LinkAmbient::Generic;
      if (const json* a = optional_field(*z, "link_ambient", p)) amb = parse_link_ambient(*a, child(p, "link_ambient"));
      b.from_link = at_path(child(p, "from_link"), [&] {
        return Link(parse_string_list(require(*z, "from_link", p), child(p, "from_link")), amb);
      });
      b.to_link = at_path(child(p, "to_link"), [&] {
        return Link(parse_string_list(require(*z, "to_link", p), child(p, "to_link")), amb);
      });
      b.from_framing = optional_field(*z, "from_framing", p)
                           ? parse_offsets((*z)["from_framing"], b.from_link, child(p, "from_framing"))
                           : Framing::base(b.from_link);
      b.to_framing = optional_field(*z, "to_framing", p)
                         ? parse_offsets((*z)["to_framing"], b.to_link, child(p, "to_framing"))
                         : Framing::base(b.to_link);
      if (const json* e = optional_field(*z, "e_z", p)) b.e_z = parse_int64(*e, child(p, "e_z"));
      b.class_mod2 = class_mod2;
      if (const json* c = optional_field(*z, "class_int", p))
        b.class_int = class_in(*c, ap.spec.h2_z, "H2_Z", child(p, "class_int"), ap.abs_z);
      if (const json* c = optional_field(*z, "is_concordance", p)) b.is_concordance = parse_bool(*c, child(p, "is_concordance"));
      at_path(p, [&] {
        b.validate();
        return 0;
      });
      q.cobordism = std::move(b);
    }
    SpanningSpec s;
    s.class_mod2 = class_mod2;
    if (const json* c = optional_field(*z, "component_euler", p)) {
      if (!c->is_object()) throw schema_error(child(p, "component_euler"), "expected an object keyed by component id");
      for (const auto& [k, v] : c->items()) s.component_euler[k] = parse_int64(v, child(child(p, "component_euler"), k));
    }
    if (const json* e = optional_field(*z, "e_a", p)) s.e_a = parse_int64(*e, child(p, "e_a"));
    if (const json* e = optional_field(*z, "e_b", p)) s.e_b = parse_int64(*e, child(p, "e_b"));
    q.spanning = std::move(s);
  }
  return q;
}

DoublePointDiagram parse_diagram(const json& j, const std::string& path) {
  allow_keys(j, {"mode", "components", "double_points"}, path);
  const std::string mode_s = parse_string(require(j, "mode", path), child(path, "mode"));
  ColumnMode mode;
  if (mode_s == "two_column")
    mode = ColumnMode::TwoColumn;
  else if (mode_s == "three_column")
    mode = ColumnMode::ThreeColumn;
  else
    throw schema_error(child(path, "mode"), "mode is \"two_column\" or \"three_column\"");
  std::vector<DiagramComponent> comps;
  const std::string cp = child(path, "components");
  const auto& carr = parse_array(require(j, "components", path), cp);
  for (std::size_t k = 0; k < carr.size(); ++k) {
    const std::string p = child(cp, k);
    allow_keys(carr[k], {"id", "column", "target"}, p);
    DiagramComponent c;
    c.id = parse_string(require(carr[k], "id", p), child(p, "id"));
    const json& col = require(carr[k], "column", p);
    if (col.is_string() && col.get<std::string>() == "all")
      c.column = kAllColumns;
    else
      c.column = static_cast<int>(parse_int64(col, child(p, "column")));
    c.target = parse_int64(require(carr[k], "target", p), child(p, "target"));
    comps.push_back(std::move(c));
  }
  std::vector<DoublePoint> points;
  if (const json* parr = optional_field(j, "double_points", path)) {
    const std::string pp = child(path, "double_points");
    for (std::size_t k = 0; k < parse_array(*parr, pp).size(); ++k) {
      const std::string p = child(pp, k);
      allow_keys((*parr)[k], {"id", "ends"}, p);
      DoublePoint dp;
      dp.id = parse_string(require((*parr)[k], "id", p), child(p, "id"));
      const auto ends = parse_string_list(require((*parr)[k], "ends", p), child(p, "ends"));
      if (ends.size() != 2) throw schema_error(child(p, "ends"), "a double point has exactly two ends");
      dp.ends = {ends[0], ends[1]};
      points.push_back(std::move(dp));
    }
  }
  try {
    return DoublePointDiagram(mode, std::move(comps), std::move(points));
  } catch (const ValidationError& e) {
    throw ValidationError(e.kind(), e.what(), path + e.path());
  }
}

json diagram_to_json(const DoublePointDiagram& d) {
  json j;
  j["mode"] = d.mode() == ColumnMode::TwoColumn ? "two_column" : "three_column";
  j["components"] = json::array();
  for (const auto& c : d.components()) {
    json cj;
    cj["id"] = c.id;
    if (c.column == kAllColumns)
      cj["column"] = "all";
    else
      cj["column"] = c.column;
    cj["target"] = c.target;
    j["components"].push_back(std::move(cj));
  }
  j["double_points"] = json::array();
  for (const auto& p : d.double_points()) j["double_points"].push_back({{"id", p.id}, {"ends", {p.ends[0], p.ends[1]}}});
  return j;
}

SignTable parse_signs(const json& j, const DoublePointDiagram& d, const std::string& path) {
  if (!j.is_object()) throw schema_error(path, "expected an object keyed by double point id");
  SignTable t(d.point_count(), d.component_count(), 1);
  std::set<std::string> seen;
  for (const auto& [pid, row] : j.items()) {
    const std::string p = child(path, pid);
    const std::size_t i = at_path(p, [&] { return d.point_index(pid); });
    seen.insert(pid);
    if (!row.is_object()) throw schema_error(p, "expected an object keyed by component id");
    if (row.size() != d.component_count()) throw ValidationError("sign_table_shape", "every component needs a sign", p);
    for (const auto& [cid, v] : row.items()) {
      const std::string q = child(p, cid);
      const std::size_t c = at_path(q, [&] { return d.component_index(cid); });
      const std::int64_t s = parse_int64(v, q);
      if (s != 1 && s != -1) throw ValidationError("bad_sign", "signs are +1 or -1", q);
      t.set(i, c, static_cast<int>(s));
    }
  }
  if (seen.size() != d.point_count()) throw ValidationError("sign_table_shape", "every double point needs signs", path);
  return t;
}

json signs_to_json(const DoublePointDiagram& d, const SignTable& eps) {
  json j = json::object();
  for (std::size_t i = 0; i < d.point_count(); ++i) {
    json row = json::object();
    for (std::size_t c = 0; c < d.component_count(); ++c) row[d.components()[c].id] = eps.sign(i, c);
    j[d.double_points()[i].id] = std::move(row);
  }
  return j;
}

std::string hash_to_string(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json move_to_json(const Move& m, const DoublePointDiagram& before) {
  return std::visit(
      [&](const auto& mv) -> json {
        using M = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<M, FingerMove>) {
          return {{"move", "finger_move"}, {"components", {mv.c, mv.d}}, {"new_points", {mv.plus_point, mv.minus_point}}};
        } else if constexpr (std::is_same_v<M, SwapSigns>) {
          return {{"move", "swap_signs"}, {"component", mv.component}, {"points", {mv.i, mv.j}}};
        } else if constexpr (std::is_same_v<M, SwapDouble>) {
          return {{"move", "swap_double"}, {"component", mv.component}, {"points", {mv.i, mv.j, mv.k}}};
        } else if constexpr (std::is_same_v<M, FlipZero>) {
          return {{"move", "flip_zero"}, {"component", mv.component}, {"point", mv.i}};
        } else {
          return {{"move", "assign_signs"}, {"signs", signs_to_json(before, mv.signs)}};
        }
      },
      m);
}

json trace_to_json(const MoveTrace& t, const DoublePointDiagram& initial, const std::optional<SignTable>& signs) {
  DiagramState st{initial, signs ? *signs : SignTable(initial.point_count(), initial.component_count(), 1)};
  json out = json::array();
  for (const auto& step : t.steps) {
    json j = move_to_json(step.move, st.diagram);
    j["hash"] = hash_to_string(step.hash);
    Move m = step.move;
    apply_move(st, m);
    out.push_back(std::move(j));
  }
  return out;
}

MoveTrace parse_trace(const json& j, const DoublePointDiagram& initial, const std::optional<SignTable>& signs,
                      const std::string& path) {
  DiagramState st{initial, signs ? *signs : SignTable(initial.point_count(), initial.component_count(), 1)};
  MoveTrace trace;
  const auto& arr = parse_array(j, path);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string p = child(path, k);
    const json& mj = arr[k];
    const std::string kind = parse_string(require(mj, "move", p), child(p, "move"));
    Move m;
    if (kind == "finger_move") {
      const auto comps = parse_string_list(require(mj, "components", p), child(p, "components"));
      const auto pts = parse_string_list(require(mj, "new_points", p), child(p, "new_points"));
      if (comps.size() != 2 || pts.size() != 2) throw schema_error(p, "finger moves name two components and two new points");
      m = FingerMove{comps[0], comps[1], pts[0], pts[1]};
    } else if (kind == "swap_signs" || kind == "swap_double") {
      const auto pts = parse_string_list(require(mj, "points", p), child(p, "points"));
      const std::string comp = parse_string(require(mj, "component", p), child(p, "component"));
      if (kind == "swap_signs" && pts.size() == 2)
        m = SwapSigns{comp, pts[0], pts[1]};
      else if (kind == "swap_double" && pts.size() == 3)
        m = SwapDouble{comp, pts[0], pts[1], pts[2]};
      else
        throw schema_error(child(p, "points"), "wrong number of points for " + kind);
    } else if (kind == "flip_zero") {
      m = FlipZero{parse_string(require(mj, "component", p), child(p, "component")),
                   parse_string(require(mj, "point", p), child(p, "point"))};
    } else if (kind == "assign_signs") {
      m = AssignSigns{parse_signs(require(mj, "signs", p), st.diagram, child(p, "signs"))};
    } else {
      throw schema_error(child(p, "move"), "unknown move '" + kind + "'");
    }
    const std::string hs = parse_string(require(mj, "hash", p), child(p, "hash"));
    std::uint64_t h = 0;
    try {
      std::size_t used = 0;
      h = std::stoull(hs, &used, 16);
      if (used != hs.size()) throw std::invalid_argument("hash");
    } catch (const std::exception&) {
      throw schema_error(child(p, "hash"), "hash is 16 hex digits");
    }
    Move applied = m;
    at_path(p, [&] {
      apply_move(st, applied);
      return 0;
    });
    trace.steps.push_back(TraceStep{std::move(m), h});
  }
  return trace;
}

}  // namespace surfcob::json_io
