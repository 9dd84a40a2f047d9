#include "surfcob/decide.hpp"

#include <cstdlib>

#include "surfcob/diagrams.hpp"
#include "surfcob/errors.hpp"
#include "surfcob/json_io.hpp"

namespace surfcob {

using nlohmann::json;

void AmbientSpec::validate() const {
  if (simply_connected && !orientable)
    throw ValidationError("inconsistent_ambient", "a simply-connected 4-manifold is orientable");
  if (is_s4 && !(simply_connected && connected && !boundary_nonempty))
    throw ValidationError("inconsistent_ambient", "S4 is closed, connected and simply connected");
  auto check_f2 = [](const std::optional<AbelianGroup>& g, const char* name) {
    if (g && !g->is_f2_space())
      throw ValidationError("not_f2", std::string(name) + " must be an F2 vector space");
  };
  check_f2(h2_rel_f2, "H2_rel_F2");
  check_f2(h2_f2, "H2_F2");
}

ReductionMap AmbientSpec::rel_reduction() const {
  if (reduce_rel) return *reduce_rel;
  if (h2_rel_z && h2_rel_f2) {
    auto canonical = ReductionMap::canonical(*h2_rel_z);
    if (canonical.target == *h2_rel_f2) return canonical;
  }
  throw ValidationError("missing_reduction", "no reduction map H2(X, dX; Z) -> H2(X, dX; F2) available");
}

void BoundaryCobordismSpec::validate() const {
  if (!from_framing.link().same_as(from_link))
    throw ValidationError("link_mismatch", "from_framing is not a framing of from_link");
  if (!to_framing.link().same_as(to_link))
    throw ValidationError("link_mismatch", "to_framing is not a framing of to_link");
  if (is_concordance && from_link.components().size() != to_link.components().size())
    throw ValidationError("not_a_concordance", "a concordance joins links with the same number of components");
  if (class_mod2 && !class_mod2->group().is_f2_space())
    throw ValidationError("not_f2", "class_mod2 must live in an F2 vector space");
}

std::string to_string(Question q) {
  switch (q) {
    case Question::Cobordant: return "cobordant";
    case Question::CobordantRelBoundary: return "cobordant_rel_boundary";
    case Question::Extends: return "extends";
    case Question::OrientedCobordant: return "oriented_cobordant";
    case Question::OrientedExtends: return "oriented_extends";
    case Question::SpanningExtends: return "spanning_extends";
    case Question::AlmostExtendable: return "almost_extendable";
    case Question::Concordant: return "concordant";
    case Question::ConsistencyAudit: return "consistency_audit";
  }
  return "cobordant";
}

Question question_from_string(const std::string& s) {
  for (auto q : {Question::Cobordant, Question::CobordantRelBoundary, Question::Extends, Question::OrientedCobordant,
                 Question::OrientedExtends, Question::SpanningExtends, Question::AlmostExtendable, Question::Concordant,
                 Question::ConsistencyAudit})
    if (to_string(q) == s) return q;
  throw ValidationError("unknown_question", "unknown question '" + s + "'");
}

namespace {

const HomologyClass& need_class(const std::optional<HomologyClass>& c, const std::optional<AbelianGroup>& group,
                                const std::string& what, const char* group_name) {
  if (!c) throw ValidationError("missing_class", what + " is required");
  if (!group) throw ValidationError("missing_group", std::string("the ambient declares no ") + group_name);
  if (!(c->group() == *group))
    throw ValidationError("group_mismatch", what + " does not live in " + group_name);
  return *c;
}

void require_same_boundary(const SurfaceSpec& a, const SurfaceSpec& b) {
  if (!a.boundary_link().same_as(b.boundary_link()))
    throw ValidationError("link_mismatch", "'" + a.id + "' and '" + b.id + "' do not share a boundary link");
}

void require_z_links(const SurfaceSpec& a, const SurfaceSpec& b, const BoundaryCobordismSpec& z) {
  if (!z.from_link.same_as(a.boundary_link()))
    throw ValidationError("link_mismatch", "the cobordism does not start at the boundary of '" + a.id + "'");
  if (!z.to_link.same_as(b.boundary_link()))
    throw ValidationError("link_mismatch", "the cobordism does not end at the boundary of '" + b.id + "'");
}

std::optional<Verdict> orientable_connected(const AmbientSpec& x, bool need_connected) {
  if (!x.orientable) return Verdict::not_applicable("X is not orientable");
  if (need_connected && !x.connected) return Verdict::not_applicable("X is not connected");
  return std::nullopt;
}

// [S0 u S1] in H2(X; F2). For a closed ambient and closed surfaces the
// absolute and relative groups coincide and the union class is a + b.
HomologyClass union_mod2_class(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                               const std::optional<HomologyClass>& given) {
  if (given) return need_class(given, x.h2_f2, "union_mod2", "H2_F2");
  if (!x.boundary_nonempty && a.closed() && b.closed() && a.class_mod2 && b.class_mod2 && x.h2_f2 &&
      x.h2_rel_f2 && *x.h2_f2 == *x.h2_rel_f2) {
    const auto& ca = need_class(a.class_mod2, x.h2_rel_f2, "class_mod2 of '" + a.id + "'", "H2_rel_F2");
    const auto& cb = need_class(b.class_mod2, x.h2_rel_f2, "class_mod2 of '" + b.id + "'", "H2_rel_F2");
    return ca + cb;
  }
  throw ValidationError("missing_class", "union_mod2 is required unless X and both surfaces are closed");
}

Verdict finish(Verdict v, const AmbientSpec& x, std::initializer_list<const SurfaceSpec*> surfaces) {
  for (const auto* s : surfaces) {
    auto w = massey_warnings(*s, x.is_s4);
    v.warnings.insert(v.warnings.end(), w.begin(), w.end());
  }
  v.check();
  return v;
}

Verdict from_obstructions(std::vector<std::string> obstructions, json certificate) {
  if (obstructions.empty()) return Verdict::yes(std::move(certificate));
  return Verdict::no(std::move(obstructions));
}

}  // namespace

Verdict decide_cobordant(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b) {
  if (auto na = orientable_connected(x, true)) return *na;
  a.validate();
  b.validate();
  const auto& ca = need_class(a.class_mod2, x.h2_rel_f2, "class_mod2 of '" + a.id + "'", "H2_rel_F2");
  const auto& cb = need_class(b.class_mod2, x.h2_rel_f2, "class_mod2 of '" + b.id + "'", "H2_rel_F2");
  std::vector<std::string> obs;
  json cert;
  if (!classes_equal(ca, cb)) obs.push_back("h2_rel_mod2");
  cert["class_mod2"] = json_io::class_to_json(ca);
  if (x.boundary_nonempty) {
    cert["euler"] = "not required: X has boundary";
  } else {
    if (!a.closed() || !b.closed())
      throw ValidationError("boundary_in_closed", "surfaces in a closed 4-manifold are closed");
    const std::int64_t ea = a.euler_at_base();
    const std::int64_t eb = b.euler_at_base();
    if (ea != eb) obs.push_back("euler");
    cert["euler"] = {ea, eb};
  }
  return finish(from_obstructions(std::move(obs), std::move(cert)), x, {&a, &b});
}

Verdict decide_cobordant_rel_boundary(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                      const std::optional<HomologyClass>& union_mod2) {
  if (auto na = orientable_connected(x, false)) return *na;
  a.validate();
  b.validate();
  require_same_boundary(a, b);
  const HomologyClass u = union_mod2_class(x, a, b, union_mod2);
  const Framing s = a.base_framing();
  const std::int64_t ea = a.euler_at(s);
  const std::int64_t eb = b.euler_at(s);
  std::vector<std::string> obs;
  if (!u.is_zero()) obs.push_back("h2_abs_mod2");
  if (ea != eb) obs.push_back("euler");
  json cert = {{"union_mod2", json_io::class_to_json(u)}, {"euler", {ea, eb}}};
  return finish(from_obstructions(std::move(obs), std::move(cert)), x, {&a, &b});
}

Verdict decide_extends_cobordism(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                 const BoundaryCobordismSpec& z) {
  if (auto na = orientable_connected(x, true)) return *na;
  a.validate();
  b.validate();
  z.validate();
  require_z_links(a, b, z);
  const auto& c = need_class(z.class_mod2, x.h2_f2, "class_mod2 of the cobordism", "H2_F2");
  const std::int64_t e0 = a.euler_at(z.from_framing);
  const std::int64_t e1 = b.euler_at(z.to_framing);
  std::vector<std::string> obs;
  if (!c.is_zero()) obs.push_back("h2_abs_mod2");
  if (!boundary_euler_balance(e0, z.e_z, e1)) obs.push_back("euler_balance");
  json cert = {{"class_mod2", json_io::class_to_json(c)}, {"euler", {{"e0", e0}, {"e_z", z.e_z}, {"e1", e1}}}};
  return finish(from_obstructions(std::move(obs), std::move(cert)), x, {&a, &b});
}

Verdict decide_oriented_cobordant(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b) {
  if (auto na = orientable_connected(x, true)) return *na;
  a.validate();
  b.validate();
  if (!a.orientable() || !b.orientable())
    return Verdict::not_applicable("oriented cobordism needs orientable surfaces");
  const auto& ca = need_class(a.class_int, x.h2_rel_z, "class_int of '" + a.id + "'", "H2_rel_Z");
  const auto& cb = need_class(b.class_int, x.h2_rel_z, "class_int of '" + b.id + "'", "H2_rel_Z");
  std::vector<std::string> obs;
  if (!classes_equal(ca, cb)) obs.push_back("h2_rel_int");
  json cert = {{"class_int", json_io::class_to_json(ca)}};
  return finish(from_obstructions(std::move(obs), std::move(cert)), x, {&a, &b});
}

Verdict decide_oriented_extends(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                const BoundaryCobordismSpec& z) {
  if (auto na = orientable_connected(x, true)) return *na;
  a.validate();
  b.validate();
  z.validate();
  require_z_links(a, b, z);
  if (!a.orientable() || !b.orientable())
    return Verdict::not_applicable("oriented extension needs orientable surfaces");
  const auto& c = need_class(z.class_int, x.h2_z, "class_int of the cobordism", "H2_Z");
  std::vector<std::string> obs;
  if (!c.is_zero()) obs.push_back("h2_abs_int");
  json cert = {{"class_int", json_io::class_to_json(c)}};
  return finish(from_obstructions(std::move(obs), std::move(cert)), x, {&a, &b});
}

Verdict decide_spanning_extends(const AmbientSpec& x, const SurfaceSpec& s, const SpanningSpec& z) {
  if (auto na = orientable_connected(x, false)) return *na;
  s.validate();
  const auto& c = need_class(z.class_mod2, x.h2_f2, "class_mod2 of Z u S", "H2_F2");
  for (const auto& comp : s.components)
    if (!z.component_euler.count(comp.id))
      throw ValidationError("incomplete_components", "no Euler number for component '" + comp.id + "'");
  for (const auto& [id, e] : z.component_euler)
    if (std::none_of(s.components.begin(), s.components.end(), [&](const auto& comp) { return comp.id == id; }))
      throw ValidationError("unknown_component", "component_euler names '" + id + "', not a component of '" + s.id + "'");
  std::vector<std::string> obs;
  if (!c.is_zero()) obs.push_back("h2_abs_mod2");
  for (const auto& [id, e] : z.component_euler)
    if (e != 0) {
      obs.push_back("component_euler");
      break;
    }
  json cert = {{"class_mod2", json_io::class_to_json(c)}, {"component_euler", z.component_euler}};
  return finish(from_obstructions(std::move(obs), std::move(cert)), x, {&s});
}

namespace {

// One component per side, self(a) and self(b) within-column arcs, and
// e_a mod 2 arcs between the sides.
DoublePointDiagram almost_extendable_diagram(const SurfaceSpec& a, const SurfaceSpec& b, std::int64_t ea,
                                             std::int64_t eb) {
  std::vector<DiagramComponent> comps;
  std::vector<DoublePoint> points;
  const bool has_a = !a.components.empty();
  const bool has_b = !b.components.empty();
  if (has_a) comps.push_back({"S0", 0, ea});
  if (has_b) comps.push_back({"S1", 1, eb});
  for (std::int64_t k = 0; k < a.self_count; ++k) points.push_back({"a" + std::to_string(k + 1), {"S0", "S0"}});
  for (std::int64_t k = 0; k < b.self_count; ++k) points.push_back({"b" + std::to_string(k + 1), {"S1", "S1"}});
  if (has_a && has_b && (ea % 2 != 0)) points.push_back({"x1", {"S0", "S1"}});
  return DoublePointDiagram(ColumnMode::TwoColumn, std::move(comps), std::move(points));
}

}  // namespace

Verdict decide_almost_extendable(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                                 const SpanningSpec& z) {
  if (auto na = orientable_connected(x, false)) return *na;
  a.validate();
  b.validate();
  auto side_euler = [](const SurfaceSpec& s, const std::optional<std::int64_t>& e, const char* name) {
    if (s.components.empty()) {
      if (e && *e != 0) throw ValidationError("bad_euler", std::string(name) + " must be 0 for an empty surface");
      return std::int64_t{0};
    }
    if (!e) throw ValidationError("missing_euler", std::string(name) + " is required");
    return *e;
  };
  const std::int64_t ea = side_euler(a, z.e_a, "e_a");
  const std::int64_t eb = side_euler(b, z.e_b, "e_b");
  const bool zero_surfaces = a.components.empty() && b.components.empty();
  std::vector<std::string> obs;
  if (!zero_surfaces || z.class_mod2) {
    const auto& c = need_class(z.class_mod2, x.h2_f2, "class_mod2 of S0 u Z u S1", "H2_F2");
    if (!c.is_zero()) obs.push_back("h2_abs_mod2");
  }
  const std::int64_t t = a.self_count + b.self_count;
  const std::int64_t delta = ea - eb;
  const bool immersed = t > 0;
  if (!immersed) {
    if (ea != eb) obs.push_back("euler");
  } else if (std::abs(delta) > 2 * t || positive_mod(delta - 2 * t, 4) != 0) {
    obs.push_back("range");
  }
  if (!obs.empty()) return finish(Verdict::no(std::move(obs)), x, {&a, &b});

  const auto diagram = almost_extendable_diagram(a, b, ea, eb);
  auto outcome = normalize(diagram);
  if (auto* bad = std::get_if<NormalizeInfeasible>(&outcome)) {
    std::string names;
    for (const auto& o : bad->obstructions) names += " " + o;
    throw InternalError("certificate diagram is infeasible although the conditions hold:" + names);
  }
  const auto& ok = std::get<NormalizeSuccess>(outcome);
  json cert;
  cert["mode"] = immersed ? "immersed" : "embedded";
  cert["diagram"] = json_io::diagram_to_json(diagram);
  cert["normalized"] = {{"diagram", json_io::diagram_to_json(ok.diagram)},
                        {"signs", json_io::signs_to_json(ok.diagram, ok.signs)},
                        {"assignment", ok.assignment}};
  cert["trace"] = json_io::trace_to_json(ok.trace, diagram, std::nullopt);
  return finish(Verdict::yes(std::move(cert)), x, {&a, &b});
}

Verdict decide_concordant(const AmbientSpec& x, const SurfaceSpec& a, const SurfaceSpec& b,
                          const std::optional<BoundaryCobordismSpec>& z,
                          const std::optional<HomologyClass>& union_mod2, const std::vector<HomologyClass>& union_int) {
  if (!x.simply_connected) return Verdict::not_applicable("out of scope: pi_1(X) != 1");
  if (!a.connected() || !b.connected())
    return Verdict::not_applicable("concordance is only classified here for connected surfaces");
  a.validate();
  b.validate();
  if (!diffeomorphic(a, b)) return finish(Verdict::no({"diffeomorphism"}), x, {&a, &b});
  const bool orientable = a.orientable();
  json form = canonical_form(a.components.front()).to_string();

  if (z) {
    if (!z->is_concordance) throw ValidationError("not_a_concordance", "z must be a concordance of the boundary links");
    Verdict v = orientable ? decide_oriented_extends(x, a, b, *z) : decide_extends_cobordism(x, a, b, *z);
    if (v.answer == Answer::Yes)
      v.certificate = json{{"surface", form}, {"via", orientable ? "oriented_extends" : "extends"}, {"conditions", *v.certificate}};
    return v;
  }

  require_same_boundary(a, b);
  if (!orientable) {
    Verdict v = decide_cobordant_rel_boundary(x, a, b, union_mod2);
    if (v.answer == Answer::Yes)
      v.certificate = json{{"surface", form}, {"via", "cobordant_rel_boundary"}, {"conditions", *v.certificate}};
    return v;
  }
  std::vector<std::string> obs;
  json cert = {{"surface", form}};
  if (!union_int.empty()) {
    std::optional<std::size_t> hit;
    for (std::size_t k = 0; k < union_int.size() && !hit; ++k) {
      const HomologyClass c = need_class(union_int[k], x.h2_z, "union_int", "H2_Z");
      if (c.is_zero()) hit = k;
    }
    if (!hit) obs.push_back("h2_abs_int");
    else cert["orientation_choice"] = *hit;
  } else {
    const auto& ca = need_class(a.class_int, x.h2_rel_z, "class_int of '" + a.id + "'", "H2_rel_Z");
    const auto& cb = need_class(b.class_int, x.h2_rel_z, "class_int of '" + b.id + "'", "H2_rel_Z");
    if (classes_equal(ca, cb))
      cert["orientation"] = "same";
    else if (classes_equal(ca, -cb))
      cert["orientation"] = "reversed";
    else
      obs.push_back("h2_rel_int");
  }
  return finish(from_obstructions(std::move(obs), std::move(cert)), x, {&a, &b});
}

json AuditReport::to_json() const {
  json j;
  j["answers"] = answers;
  j["checked"] = checked;
  j["violations"] = violations;
  return j;
}

AuditReport consistency_audit(const Query& q) {
  AuditReport report;
  if (q.surfaces.size() < 2) return report;
  const auto& x = q.ambient;
  const auto& a = q.surfaces[0];
  const auto& b = q.surfaces[1];

  auto run = [&](const std::string& name, auto&& f) -> std::optional<Verdict> {
    try {
      Verdict v = f();
      report.answers[name] = to_string(v.answer);
      return v;
    } catch (const ValidationError&) {
      report.answers[name] = "skipped";
      return std::nullopt;
    }
  };
  const auto cob = run("cobordant", [&] { return decide_cobordant(x, a, b); });
  const auto rel = run("cobordant_rel_boundary", [&] { return decide_cobordant_rel_boundary(x, a, b, q.union_mod2); });
  const auto con = run("concordant", [&] {
    return decide_concordant(x, a, b, std::nullopt, q.union_mod2, q.union_int);
  });
  const auto ori = run("oriented_cobordant", [&] { return decide_oriented_cobordant(x, a, b); });

  auto yes = [](const std::optional<Verdict>& v) { return v && v->answer == Answer::Yes; };
  auto decided = [](const std::optional<Verdict>& v) { return v && v->answer != Answer::NotApplicable; };
  auto implies = [&](const std::string& name, const std::optional<Verdict>& p, const std::optional<Verdict>& c) {
    if (!yes(p) || !decided(c)) return;
    report.checked.push_back(name);
    if (c->answer != Answer::Yes) report.violations.push_back(name);
  };
  implies("concordant => cobordant_rel_boundary", con, rel);
  implies("cobordant_rel_boundary => cobordant", rel, cob);
  implies("concordant => cobordant", con, cob);

  if (yes(ori)) {
    try {
      const auto map = x.rel_reduction();
      const auto ra = mod2_reduce(*a.class_int, map);
      const auto rb = mod2_reduce(*b.class_int, map);
      report.checked.push_back("oriented_cobordant => mod-2 classes agree");
      if (!classes_equal(ra, rb)) report.violations.push_back("oriented_cobordant => mod-2 classes agree");
      const bool consistent = a.class_mod2 && b.class_mod2 && classes_equal(*a.class_mod2, ra) &&
                              classes_equal(*b.class_mod2, rb);
      if (consistent && decided(cob)) {
        report.checked.push_back("oriented_cobordant => no h2_rel_mod2 obstruction");
        const auto& o = cob->obstructions;
        if (std::find(o.begin(), o.end(), "h2_rel_mod2") != o.end())
          report.violations.push_back("oriented_cobordant => no h2_rel_mod2 obstruction");
      }
    } catch (const ValidationError&) {
    }
  }
  return report;
}

namespace {

const SurfaceSpec& surface_at(const Query& q, std::size_t k) {
  if (q.surfaces.size() <= k)
    throw ValidationError("surface_count", "question '" + to_string(q.question) + "' needs more surfaces", "/surfaces");
  return q.surfaces[k];
}

const BoundaryCobordismSpec& need_cobordism(const Query& q) {
  if (!q.cobordism) throw ValidationError("missing_cobordism", "question needs z with from_link and to_link", "/z");
  return *q.cobordism;
}

const SpanningSpec& need_spanning(const Query& q) {
  if (!q.spanning) throw ValidationError("missing_z", "question needs z", "/z");
  return *q.spanning;
}

}  // namespace

json answer(const Query& q) {
  q.ambient.validate();
  switch (q.question) {
    case Question::Cobordant:
      return decide_cobordant(q.ambient, surface_at(q, 0), surface_at(q, 1)).to_json();
    case Question::CobordantRelBoundary:
      return decide_cobordant_rel_boundary(q.ambient, surface_at(q, 0), surface_at(q, 1), q.union_mod2).to_json();
    case Question::Extends:
      return decide_extends_cobordism(q.ambient, surface_at(q, 0), surface_at(q, 1), need_cobordism(q)).to_json();
    case Question::OrientedCobordant:
      return decide_oriented_cobordant(q.ambient, surface_at(q, 0), surface_at(q, 1)).to_json();
    case Question::OrientedExtends:
      return decide_oriented_extends(q.ambient, surface_at(q, 0), surface_at(q, 1), need_cobordism(q)).to_json();
    case Question::SpanningExtends:
      return decide_spanning_extends(q.ambient, surface_at(q, 0), need_spanning(q)).to_json();
    case Question::AlmostExtendable: {
      const SurfaceSpec empty;
      const auto& a = q.surfaces.empty() ? empty : surface_at(q, 0);
      const auto& b = q.surfaces.empty() ? empty : surface_at(q, 1);
      return decide_almost_extendable(q.ambient, a, b, q.spanning.value_or(SpanningSpec{})).to_json();
    }
    case Question::Concordant: {
      std::optional<BoundaryCobordismSpec> z = q.cobordism;
      return decide_concordant(q.ambient, surface_at(q, 0), surface_at(q, 1), z, q.union_mod2, q.union_int).to_json();
    }
    case Question::ConsistencyAudit: {
      auto report = consistency_audit(q);
      if (!report.violations.empty()) {
        std::string msg = "implication violated:";
        for (const auto& v : report.violations) msg += " [" + v + "]";
        throw InternalError(msg);
      }
      return report.to_json();
    }
  }
  throw InternalError("unhandled question");
}

}  // namespace surfcob
