#pragma once

// Decision procedures for cobordism, extension and concordance questions
// about surfaces in a 4-manifold, evaluated over user-supplied invariants.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfcob/framing.hpp"
#include "surfcob/homology.hpp"
#include "surfcob/surfaces.hpp"

namespace surfcob {

/// Profile of the ambient 4-manifold X. Groups are optional and only
/// demanded by the questions that need them.
struct AmbientSpec {
  bool orientable = true;
  bool simply_connected = false;
  bool boundary_nonempty = false;
  bool connected = true;
  bool is_s4 = false;

  std::optional<AbelianGroup> h2_rel_f2;  // H2(X, dX; F2)
  std::optional<AbelianGroup> h2_f2;      // H2(X; F2)
  std::optional<AbelianGroup> h2_rel_z;   // H2(X, dX; Z)
  std::optional<AbelianGroup> h2_z;       // H2(X; Z)
  std::optional<ReductionMap> reduce_rel;  // H2(X, dX; Z) -> H2(X, dX; F2)
  std::optional<ReductionMap> reduce_abs;  // H2(X; Z) -> H2(X; F2)

  void validate() const;
  /// The given map, or the canonical one when its target matches h2_rel_f2.
  ReductionMap rel_reduction() const;
};

/// The cobordism Z in dX x I between the boundary links.
struct BoundaryCobordismSpec {
  Link from_link;
  Link to_link;
  Framing from_framing;  // s0, on from_link
  Framing to_framing;    // s1, on to_link
  std::int64_t e_z = 0;  // e(Z, s0 u s1)
  std::optional<HomologyClass> class_mod2;  // [S0 u pr(Z) u S1] in H2(X; F2)
  std::optional<HomologyClass> class_int;   // [-S0 u -pr(Z) u S1] in H2(X; Z)
  bool is_concordance = false;

  void validate() const;
};

/// Data for questions about a spanning surface Z of a link in dX.
struct SpanningSpec {
  std::optional<HomologyClass> class_mod2;  // [Z u S] or [S0 u Z u S1] in H2(X; F2)
  std::map<std::string, std::int64_t> component_euler;  // e(S_c, s^Z) per component
  std::optional<std::int64_t> e_a;  // e(S0, s^Z)
  std::optional<std::int64_t> e_b;  // e(S1, s^Z)
};

enum class Question {
  Cobordant,
  CobordantRelBoundary,
  Extends,
  OrientedCobordant,
  OrientedExtends,
  SpanningExtends,
  AlmostExtendable,
  Concordant,
  ConsistencyAudit,
};

std::string to_string(Question q);
/// Throws ValidationError("unknown_question").
Question question_from_string(const std::string& s);

struct Query {
  Question question = Question::Cobordant;
  AmbientSpec ambient;
  std::vector<SurfaceSpec> surfaces;
  std::optional<BoundaryCobordismSpec> cobordism;
  std::optional<SpanningSpec> spanning;
  std::optional<HomologyClass> union_mod2;  // [S0 u S1] in H2(X; F2)
  std::vector<HomologyClass> union_int;     // [S0 u S1] in H2(X; Z), one per orientation choice
};

Verdict decide_cobordant(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b);

Verdict decide_cobordant_rel_boundary(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                      const std::optional<HomologyClass>& union_mod2);

Verdict decide_extends_cobordism(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                 const BoundaryCobordismSpec& z);

Verdict decide_oriented_cobordant(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b);

Verdict decide_oriented_extends(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                const BoundaryCobordismSpec& z);

Verdict decide_spanning_extends(const AmbientSpec& x, const SurfaceSpec& s, const SpanningSpec& z);

/// Embedded input: yes iff the class vanishes and e_a = e_b, with a
/// normalized double point diagram as certificate. Immersed input is judged
/// by the range condition with T = self(a) + self(b).
Verdict decide_almost_extendable(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                 const SpanningSpec& z);

Verdict decide_concordant(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                          const std::optional<BoundaryCobordismSpec>& z,
                          const std::optional<HomologyClass>& union_mod2, const std::vector<HomologyClass>& union_int);

struct AuditReport {
  std::map<std::string, std::string> answers;  // decider -> yes/no/not_applicable/skipped
  std::vector<std::string> checked;             // implications that were evaluated
  std::vector<std::string> violations;

  nlohmann::json to_json() const;
};

/// Runs every decider the data supports and checks
/// concordant => cobordant rel boundary => cobordant and
/// oriented cobordant => mod-2 classes agree.
AuditReport consistency_audit(const Query& q);

/// Dispatches on q.question; the audit throws InternalError on a violation.
nlohmann::json answer(const Query& q);

}  // namespace surfcob
