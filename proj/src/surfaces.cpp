#include "surfcob/surfaces.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "surfcob/errors.hpp"

namespace surfcob {

namespace {

ValidationError component_error(const ComponentSpec& c, const std::string& kind, const std::string& what) {
  return ValidationError(kind, "component '" + c.id + "': " + what);
}

}  // namespace

void ComponentSpec::validate() const {
  canonical_form(*this);
  std::set<std::string> seen;
  for (const auto& k : boundary)
    if (!seen.insert(k).second) throw component_error(*this, "duplicate_component", "boundary names '" + k + "' twice");
  if (closed()) {
    if (rel_euler) throw component_error(*this, "euler_kind", "closed components take an absolute Euler number");
  } else {
    if (euler) throw component_error(*this, "euler_kind", "components with boundary need Euler data relative to a framing");
    if (rel_euler) {
      const auto& link = rel_euler->base_framing.link();
      if (link.components().size() != boundary.size() ||
          !std::all_of(boundary.begin(), boundary.end(), [&](const auto& k) { return link.contains(k); }))
        throw component_error(*this, "link_mismatch", "base framing is not a framing of the component's boundary");
    }
  }
}

void SurfaceSpec::validate() const {
  std::set<std::string> ids;
  std::set<std::string> boundary_names;
  for (const auto& c : components) {
    c.validate();
    if (!ids.insert(c.id).second) throw ValidationError("duplicate_component", "component id '" + c.id + "' repeated");
    for (const auto& k : c.boundary)
      if (!boundary_names.insert(k).second)
        throw ValidationError("duplicate_component", "boundary curve '" + k + "' belongs to two components");
    if (c.rel_euler && c.rel_euler->base_framing.link().ambient() != boundary_ambient)
      throw ValidationError("link_mismatch", "component '" + c.id + "' framing ambient differs from the surface's");
  }
  if (self_count < 0) throw ValidationError("bad_self_count", "self_count must be nonnegative");
  if (embedded && self_count != 0) throw ValidationError("bad_self_count", "embedded surfaces have self_count 0");
  if (class_mod2 && !class_mod2->group().is_f2_space())
    throw ValidationError("not_f2", "class_mod2 must live in an F2 vector space");
}

bool SurfaceSpec::closed() const {
  return std::all_of(components.begin(), components.end(), [](const auto& c) { return c.closed(); });
}

bool SurfaceSpec::orientable() const {
  return std::all_of(components.begin(), components.end(), [](const auto& c) { return c.orientable; });
}

Link SurfaceSpec::boundary_link() const {
  std::vector<std::string> names;
  for (const auto& c : components) names.insert(names.end(), c.boundary.begin(), c.boundary.end());
  return Link(std::move(names), boundary_ambient);
}

Framing SurfaceSpec::base_framing() const {
  std::map<std::string, std::int64_t> offsets;
  for (const auto& c : components) {
    if (c.closed()) continue;
    if (!c.rel_euler) throw ValidationError("missing_euler", "component '" + c.id + "' has no relative Euler data");
    for (const auto& [k, v] : c.rel_euler->base_framing.offsets()) offsets[k] = v;
  }
  return Framing(boundary_link(), std::move(offsets));
}

bool SurfaceSpec::has_euler_data() const {
  return std::all_of(components.begin(), components.end(),
                     [](const auto& c) { return c.closed() ? c.euler.has_value() : c.rel_euler.has_value(); });
}

std::int64_t SurfaceSpec::euler_at(const Framing& s) const {
  if (!s.link().same_as(boundary_link()))
    throw ValidationError("link_mismatch", "framing is not a framing of the boundary of '" + id + "'");
  std::int64_t total = 0;
  for (const auto& c : components) {
    if (c.closed()) {
      if (!c.euler) throw ValidationError("missing_euler", "component '" + c.id + "' has no Euler number");
      total += *c.euler;
    } else {
      if (!c.rel_euler) throw ValidationError("missing_euler", "component '" + c.id + "' has no relative Euler data");
      total += euler_under_framing(*c.rel_euler, s.restricted_to(c.rel_euler->base_framing.link()));
    }
  }
  return total;
}

std::string CanonicalForm::to_string() const {
  std::ostringstream os;
  if (orientable)
    os << "O(g=" << genus_or_crosscaps << ",b=" << boundary_count << ")";
  else
    os << "N(k=" << genus_or_crosscaps << ",b=" << boundary_count << ")";
  return os.str();
}

std::int64_t CanonicalForm::euler_characteristic() const {
  return orientable ? 2 - 2 * genus_or_crosscaps - boundary_count : 2 - genus_or_crosscaps - boundary_count;
}

CanonicalForm canonical_form(const ComponentSpec& c) {
  const auto b = static_cast<std::int64_t>(c.boundary.size());
  const std::int64_t chi = c.euler_characteristic;
  if (chi > 2) throw component_error(c, "bad_surface", "Euler characteristic exceeds 2");
  const std::int64_t deficit = 2 - chi - b;
  if (c.orientable) {
    if (deficit < 0 || deficit % 2 != 0)
      throw component_error(c, "bad_surface", "no orientable surface has this Euler characteristic and boundary count");
    return CanonicalForm{true, deficit / 2, b};
  }
  if (deficit < 1)
    throw component_error(c, "bad_surface", "no non-orientable surface has this Euler characteristic and boundary count");
  return CanonicalForm{false, deficit, b};
}

bool diffeomorphic(const SurfaceSpec& a, const SurfaceSpec& b) {
  if (a.components.size() != b.components.size()) return false;
  auto forms = [](const SurfaceSpec& s) {
    std::vector<CanonicalForm> out;
    for (const auto& c : s.components) out.push_back(canonical_form(c));
    std::sort(out.begin(), out.end());
    return out;
  };
  return forms(a) == forms(b);
}

std::int64_t puncture_adjust(std::int64_t e, std::int64_t frK0, std::int64_t frK1) { return e + frK0 + frK1; }

std::int64_t homotopy_invariant(std::int64_t e, std::int64_t self_count) {
  return positive_mod(e - 2 * self_count, 4);
}

std::vector<std::int64_t> massey_range(std::int64_t chi) {
  if (chi > 1) throw ValidationError("bad_surface", "closed non-orientable surfaces have Euler characteristic at most 1");
  std::vector<std::int64_t> out;
  for (std::int64_t e = 2 * chi - 4; e <= 4 - 2 * chi; e += 4) out.push_back(e);
  return out;
}

std::vector<std::string> massey_warnings(const SurfaceSpec& s, bool ambient_is_s4) {
  std::vector<std::string> out;
  if (!ambient_is_s4) return out;
  for (const auto& c : s.components) {
    if (c.orientable || !c.closed() || !c.euler) continue;
    const auto range = massey_range(c.euler_characteristic);
    if (std::find(range.begin(), range.end(), *c.euler) == range.end()) {
      std::ostringstream os;
      os << "component '" << c.id << "' of '" << s.id << "' has e=" << *c.euler
         << ", outside the values realizable in S4 for chi=" << c.euler_characteristic;
      out.push_back(os.str());
    }
  }
  return out;
}

std::string to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::NotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

Verdict Verdict::yes(nlohmann::json certificate) {
  Verdict v;
  v.answer = Answer::Yes;
  v.certificate = std::move(certificate);
  return v;
}

Verdict Verdict::no(std::vector<std::string> obstructions) {
  Verdict v;
  v.answer = Answer::No;
  v.obstructions = std::move(obstructions);
  return v;
}

Verdict Verdict::not_applicable(std::string reason) {
  Verdict v;
  v.answer = Answer::NotApplicable;
  v.reason = std::move(reason);
  return v;
}

void Verdict::check() const {
  if (answer == Answer::No && obstructions.empty()) throw InternalError("negative verdict without obstructions");
  if (answer == Answer::Yes && !certificate) throw InternalError("positive verdict without certificate");
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json j;
  j["answer"] = to_string(answer);
  if (answer == Answer::No) j["obstructions"] = obstructions;
  if (certificate) j["certificate"] = *certificate;
  if (answer == Answer::NotApplicable) j["reason"] = reason;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

}  // namespace surfcob
