#pragma once

// Surface presentations: classification of compact surfaces, Euler data,
// puncturing arithmetic and the verdict type shared by the deciders.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfcob/framing.hpp"
#include "surfcob/homology.hpp"

namespace surfcob {

/// One connected component of a compact surface.
struct ComponentSpec {
  std::string id;
  bool orientable = true;
  std::int64_t euler_characteristic = 2;
  std::vector<std::string> boundary;  // link component names, empty when closed
  std::optional<std::int64_t> euler;  // absolute normal Euler number (closed only)
  std::optional<RelEulerDatum> rel_euler;  // relative to a framing of the boundary

  bool closed() const { return boundary.empty(); }
  /// Throws ValidationError on any broken invariant.
  void validate() const;
};

/// A properly embedded (or immersed, when self_count > 0) compact surface.
struct SurfaceSpec {
  std::string id;
  std::vector<ComponentSpec> components;
  LinkAmbient boundary_ambient = LinkAmbient::Generic;
  std::optional<HomologyClass> class_mod2;
  std::optional<HomologyClass> class_int;
  std::int64_t self_count = 0;
  bool embedded = true;

  void validate() const;
  bool closed() const;
  bool connected() const { return components.size() == 1; }
  bool orientable() const;
  Link boundary_link() const;
  /// Union of the components' base framings.
  Framing base_framing() const;
  bool has_euler_data() const;
  /// e(surface, s) for s a framing of boundary_link(); closed components
  /// contribute their absolute value. Throws ValidationError("missing_euler").
  std::int64_t euler_at(const Framing& s) const;
  std::int64_t euler_at_base() const { return euler_at(base_framing()); }
};

struct CanonicalForm {
  bool orientable = true;
  std::int64_t genus_or_crosscaps = 0;
  std::int64_t boundary_count = 0;

  /// "O(g=3,b=0)" or "N(k=2,b=1)".
  std::string to_string() const;
  /// Euler characteristic recovered from the normal form.
  std::int64_t euler_characteristic() const;

  auto operator<=>(const CanonicalForm&) const = default;
};

CanonicalForm canonical_form(const ComponentSpec& c);

/// Componentwise classification up to diffeomorphism.
bool diffeomorphic(const SurfaceSpec& a, const SurfaceSpec& b);

/// Relative Euler number after puncturing at a double point whose Hopf link
/// components carry framings frK0 and frK1.
std::int64_t puncture_adjust(std::int64_t e, std::int64_t frK0, std::int64_t frK1);

/// (e - 2 self) mod 4, in {0, 1, 2, 3}. Invariant under regular homotopy.
std::int64_t homotopy_invariant(std::int64_t e, std::int64_t self_count);

/// Normal Euler numbers a closed non-orientable surface of Euler
/// characteristic chi can have in S^4: 2chi-4, 2chi, ..., 4-2chi.
std::vector<std::int64_t> massey_range(std::int64_t chi);

/// Warnings for closed non-orientable components whose absolute Euler
/// number lies outside massey_range. Empty unless `ambient_is_s4`.
std::vector<std::string> massey_warnings(const SurfaceSpec& s, bool ambient_is_s4);

enum class Answer { Yes, No, NotApplicable };

std::string to_string(Answer a);

struct Verdict {
  Answer answer = Answer::NotApplicable;
  std::vector<std::string> obstructions;
  std::optional<nlohmann::json> certificate;
  std::vector<std::string> warnings;
  std::string reason;  // which hypothesis of the classification fails

  static Verdict yes(nlohmann::json certificate);
  static Verdict no(std::vector<std::string> obstructions);
  static Verdict not_applicable(std::string reason);

  /// no => obstructions nonempty; yes => certificate present.
  void check() const;
  nlohmann::json to_json() const;
};

}  // namespace surfcob
