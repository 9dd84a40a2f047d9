#include "surfcob/framing.hpp"

#include <algorithm>
#include <set>

#include "surfcob/errors.hpp"

namespace surfcob {

Link::Link(std::vector<std::string> components, LinkAmbient ambient)
    : components_(std::move(components)), ambient_(ambient) {
  std::set<std::string> seen;
  for (const auto& c : components_)
    if (!seen.insert(c).second) throw ValidationError("duplicate_component", "link component '" + c + "' repeated");
}

bool Link::contains(const std::string& id) const {
  return std::find(components_.begin(), components_.end(), id) != components_.end();
}

bool Link::same_as(const Link& other) const {
  if (empty() && other.empty()) return true;
  if (ambient_ != other.ambient_ || components_.size() != other.components_.size()) return false;
  return std::all_of(components_.begin(), components_.end(), [&](const auto& c) { return other.contains(c); });
}

Link Link::disjoint_union(const Link& other) const {
  if (ambient_ != other.ambient_) throw ValidationError("link_mismatch", "links live in different ambients");
  std::vector<std::string> all = components_;
  all.insert(all.end(), other.components_.begin(), other.components_.end());
  return Link(std::move(all), ambient_);
}

Framing::Framing(Link link, std::map<std::string, std::int64_t> offsets)
    : link_(std::move(link)), offsets_(std::move(offsets)) {
  for (const auto& [id, value] : offsets_)
    if (!link_.contains(id)) throw ValidationError("unknown_component", "framing names '" + id + "', not in the link");
  for (const auto& c : link_.components())
    if (!offsets_.count(c)) throw ValidationError("missing_offset", "framing has no offset for '" + c + "'");
}

Framing Framing::base(const Link& link) {
  std::map<std::string, std::int64_t> zero;
  for (const auto& c : link.components()) zero[c] = 0;
  return Framing(link, std::move(zero));
}

std::int64_t Framing::offset(const std::string& component) const {
  auto it = offsets_.find(component);
  if (it == offsets_.end()) throw ValidationError("unknown_component", "no component '" + component + "' in framing");
  return it->second;
}

Framing Framing::restricted_to(const Link& sublink) const {
  std::map<std::string, std::int64_t> sub;
  for (const auto& c : sublink.components()) sub[c] = offset(c);
  return Framing(sublink, std::move(sub));
}

Framing twist(const Framing& s, const std::string& component, std::int64_t n) {
  if (!s.link().contains(component))
    throw ValidationError("unknown_component", "cannot twist '" + component + "': not a link component");
  auto offsets = s.offsets();
  offsets[component] += n;
  return Framing(s.link(), std::move(offsets));
}

std::int64_t total_offset_difference(const Framing& a, const Framing& b) {
  if (!a.link().same_as(b.link())) throw ValidationError("link_mismatch", "framings are on different links");
  std::int64_t total = 0;
  for (const auto& c : a.link().components()) total += a.offset(c) - b.offset(c);
  return total;
}

std::int64_t euler_under_framing(const RelEulerDatum& d, const Framing& s) {
  return d.e_base + total_offset_difference(s, d.base_framing);
}

std::vector<Framing> hopf_seifert_framings() {
  const Link hopf({"K", "K'"}, LinkAmbient::S3);
  return {Framing(hopf, {{"K", 1}, {"K'", 1}}), Framing(hopf, {{"K", -1}, {"K'", -1}})};
}

bool boundary_euler_balance(std::int64_t e0, std::int64_t ez, std::int64_t e1) { return e1 == e0 + ez; }

std::int64_t positive_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

bool mod2_intersection_consistent(int intersection01, std::int64_t e0, std::int64_t e1) {
  const std::int64_t i = positive_mod(intersection01, 2);
  return positive_mod(e0, 2) == i && positive_mod(e1, 2) == i;
}

}  // namespace surfcob
