#pragma once

// Framings of links as torsor coordinates over a declared base framing, and
// the relative normal Euler number bookkeeping that depends on them.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace surfcob {

enum class LinkAmbient { S3, Generic };

/// Ordered, uniquely named components of a closed 1-manifold in an oriented
/// 3-manifold.
class Link {
 public:
  Link() = default;
  Link(std::vector<std::string> components, LinkAmbient ambient);

  const std::vector<std::string>& components() const { return components_; }
  LinkAmbient ambient() const { return ambient_; }
  bool contains(const std::string& id) const;
  bool empty() const { return components_.empty(); }

  /// Same component names (as a set) and ambient tag. Empty links always agree.
  bool same_as(const Link& other) const;
  /// Disjoint union; names must stay unique.
  Link disjoint_union(const Link& other) const;

  friend bool operator==(const Link&, const Link&) = default;

 private:
  std::vector<std::string> components_;
  LinkAmbient ambient_ = LinkAmbient::Generic;
};

/// Integer offset per component relative to the link's base framing. In S3
/// the base is the 0-framing, so offsets are the absolute values fr_K.
class Framing {
 public:
  Framing() = default;
  Framing(Link link, std::map<std::string, std::int64_t> offsets);

  /// The base framing itself (all offsets zero).
  static Framing base(const Link& link);

  const Link& link() const { return link_; }
  const std::map<std::string, std::int64_t>& offsets() const { return offsets_; }
  std::int64_t offset(const std::string& component) const;

  /// Restriction to the components of `sublink`, which must be contained in this link.
  Framing restricted_to(const Link& sublink) const;

  friend bool operator==(const Framing&, const Framing&) = default;

 private:
  Link link_;
  std::map<std::string, std::int64_t> offsets_;
};

/// n positive twists on one component.
Framing twist(const Framing& s, const std::string& component, std::int64_t n);

/// Sum over components of (a.offset - b.offset). Links must agree.
std::int64_t total_offset_difference(const Framing& a, const Framing& b);

/// e(surface, base_framing) for one surface with boundary.
struct RelEulerDatum {
  std::string surface_id;
  Framing base_framing;
  std::int64_t e_base = 0;
};

/// e_base + sum_K (s[K] - base[K]). Throws ValidationError("link_mismatch").
std::int64_t euler_under_framing(const RelEulerDatum& d, const Framing& s);

/// The Seifert framings of the two annuli spanning a Hopf link K u K' in S3:
/// fr_K = fr_K' = +1 and fr_K = fr_K' = -1.
std::vector<Framing> hopf_seifert_framings();

/// e(Y boundary) = 0 for a cobordism Y: e1 = e0 + eZ.
bool boundary_euler_balance(std::int64_t e0, std::int64_t ez, std::int64_t e1);

/// [S0].[S1] = e(S0, s^Z) = e(S1, s^Z) mod 2 when [Z u S] = 0.
bool mod2_intersection_consistent(int intersection01, std::int64_t e0, std::int64_t e1);

/// Floor modulus in [0, m).
std::int64_t positive_mod(std::int64_t x, std::int64_t m);

}  // namespace surfcob
