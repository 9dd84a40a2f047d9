// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "surfcob/cli.hpp"
#include "surfcob/decide.hpp"
#include "surfcob/diagrams.hpp"
#include "surfcob/framing.hpp"
#include "surfcob/homology.hpp"
#include "surfcob/surfaces.hpp"

using namespace surfcob;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::vector<std::int64_t> component_sums(const DoublePointDiagram& d, const SignTable& eps) {
  std::vector<std::int64_t> out;
  for (std::size_t c = 0; c < d.component_count(); ++c) out.push_back(component_sum(d, eps, c));
  return out;
}

std::vector<std::int64_t> targets(const DoublePointDiagram& d) {
  std::vector<std::int64_t> out;
  for (const auto& c : d.components()) out.push_back(c.target);
  return out;
}

bool predicates_hold(const DoublePointDiagram& d) {
  if (!parity_valid(d) || !feasible_three(d)) return false;
  return d.mode() == ColumnMode::ThreeColumn || feasible_two(d);
}

// Oracle equivalence, plus the infeasibility certificate and trace replay on
// the same instances.
struct DiagramRun {
  int instances = 0, successes = 0, mismatches = 0, oracle_checked = 0, summed = 0;
  int infeasible = 0, certificate_failures = 0;
  int replays = 0, replay_failures = 0;
};

DiagramRun run_diagrams(int count, std::uint64_t seed) {
  DiagramRun r;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    const auto d = random_diagram(rng);
    ++r.instances;
    const bool expect = predicates_hold(d);
    const auto out = normalize(d);
    const auto* ok = std::get_if<NormalizeSuccess>(&out);
    if ((ok != nullptr) != expect) {
      ++r.mismatches;
      continue;
    }
    if (!ok) {
      ++r.infeasible;
      if (oracle::assignable_after_fingers(d, 2)) ++r.certificate_failures;
      continue;
    }
    ++r.successes;
    bool good = meets_targets(ok->diagram, ok->signs);
    for (std::size_t i = 0; i < ok->diagram.point_count(); ++i)
      good = good && classify_type(ok->diagram, ok->signs, i) == PointType::I;
    std::vector<std::int64_t> direct(ok->diagram.component_count(), 0);
    for (std::size_t i = 0; i < ok->diagram.point_count(); ++i)
      for (std::size_t c = 0; c < ok->diagram.component_count(); ++c)
        direct[c] += ok->diagram.multiplicity(i, c) * ok->assignment[i];
    good = good && direct == targets(ok->diagram);
    if (ok->diagram.point_count() <= kOracleMaxPoints) {
      ++r.oracle_checked;
      good = good && oracle_assign(ok->diagram).has_value();
    } else {
      ++r.summed;
    }
    if (!good) ++r.mismatches;

    ++r.replays;
    try {
      const auto again = replay(d, std::nullopt, ok->trace);
      if (!(again.diagram == ok->diagram) || !(again.signs == ok->signs) ||
          state_hash(again.diagram, again.signs) != ok->trace.steps.back().hash)
        ++r.replay_failures;
    } catch (const Error&) {
      ++r.replay_failures;
    }
  }
  return r;
}

Outcome move_invariance(int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int done = 0, violations = 0;
  std::map<std::string, int> by_kind;
  while (done < pairs) {
    const auto d = random_diagram(rng);
    DiagramState s{d, random_signs(rng, d)};
    auto moves = oracle::legal_moves(s.diagram, s.signs);
    if (moves.empty()) continue;
    auto move = moves[static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<std::int64_t>(moves.size()) - 1))];
    const auto sums = component_sums(s.diagram, s.signs);
    const auto t = targets(s.diagram);
    const bool parity = parity_valid(s.diagram);
    const auto residues = feasibility_obstructions(s.diagram);
    const auto residue_three = positive_mod(std::accumulate(t.begin(), t.end(), std::int64_t{0}) -
                                                2 * static_cast<std::int64_t>(s.diagram.point_count()), 4);
    const auto within = d.mode() == ColumnMode::TwoColumn ? within_column_count(s.diagram) : 0;
    const auto delta = d.mode() == ColumnMode::TwoColumn ? column_difference(s.diagram) : 0;
    apply_move(s, move);
    ++done;
    ++by_kind[std::visit([](const auto& m) -> std::string {
      using M = std::decay_t<decltype(m)>;
      if constexpr (std::is_same_v<M, FingerMove>) return "finger";
      else if constexpr (std::is_same_v<M, SwapSigns>) return "swap";
      else if constexpr (std::is_same_v<M, SwapDouble>) return "swap_double";
      else if constexpr (std::is_same_v<M, FlipZero>) return "flip_zero";
      else return "assign";
    }, move)];
    const auto t2 = targets(s.diagram);
    bool ok = component_sums(s.diagram, s.signs) == sums && t2 == t && parity_valid(s.diagram) == parity &&
              feasibility_obstructions(s.diagram) == residues &&
              positive_mod(std::accumulate(t2.begin(), t2.end(), std::int64_t{0}) -
                               2 * static_cast<std::int64_t>(s.diagram.point_count()), 4) == residue_three;
    if (d.mode() == ColumnMode::TwoColumn)
      ok = ok && within_column_count(s.diagram) == within && column_difference(s.diagram) == delta;
    if (!ok) ++violations;
  }
  std::ostringstream os;
  os << done << " pairs (";
  bool first = true;
  for (const auto& [k, n] : by_kind) {
    os << (first ? "" : ", ") << k << " " << n;
    first = false;
  }
  os << "), " << violations << " violations";
  return {violations == 0, os.str()};
}

SurfaceSpec closed_rp2(const std::string& id, std::int64_t e) {
  SurfaceSpec s;
  s.id = id;
  ComponentSpec c;
  c.id = id + "c";
  c.orientable = false;
  c.euler_characteristic = 1;
  c.euler = e;
  s.components.push_back(c);
  s.class_mod2 = HomologyClass::zero(AbelianGroup::f2(0));
  return s;
}

Outcome reference_fixtures() {
  std::vector<std::string> failed;
  std::set<std::int64_t> fr;
  const auto hopf = hopf_seifert_framings();
  for (const auto& s : hopf) {
    const auto& names = s.link().components();
    if (names.size() != 2 || s.offset(names[0]) != s.offset(names[1])) failed.push_back("hopf equal framings");
    fr.insert(s.offset(names[0]));
  }
  if (hopf.size() != 2 || fr != std::set<std::int64_t>{-1, 1}) failed.push_back("hopf values");
  if (massey_range(1) != std::vector<std::int64_t>{-2, 2}) failed.push_back("massey_range(1)");

  AmbientSpec x;
  x.orientable = true;
  x.simply_connected = true;
  x.connected = true;
  x.h2_rel_f2 = AbelianGroup::f2(0);
  x.h2_f2 = AbelianGroup::f2(0);
  const auto p = closed_rp2("P", 2), q = closed_rp2("Q", -2);
  const auto closed = decide_cobordant(x, p, q);
  if (closed.answer != Answer::No || closed.obstructions != std::vector<std::string>{"euler"})
    failed.push_back("closed ambient rejects");
  x.boundary_nonempty = true;
  if (decide_cobordant(x, p, q).answer != Answer::Yes) failed.push_back("ambient with boundary accepts");

  std::string detail = "hopf {-1,+1}, massey_range(1) = {-2,2}, RP2 e=+-2 pair: closed no(euler), boundary yes";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) detail += " [" + f + "]";
  }
  return {failed.empty(), detail};
}

bool subset_of(const json& expect, const json& got) {
  if (!expect.is_object()) return expect == got;
  if (!got.is_object()) return false;
  for (const auto& [k, v] : expect.items())
    if (!got.contains(k) || !subset_of(v, got[k])) return false;
  return true;
}

Outcome fixture_library() {
  const auto list = json::parse(cli::run({"fixtures"}).output)["fixtures"];
  int passed = 0;
  std::vector<std::string> failed;
  for (const auto& f : list) {
    const std::string name = f["name"];
    const auto doc = json::parse(cli::run({"fixtures", "--name", name}).output);
    std::string cmd = "decide";
    if (f["kind"] == "homology") cmd = "homology";
    if (f["kind"] == "diagram")
      cmd = doc["expect"].contains("assignment") && !doc["expect"].contains("status") ? "diagram-oracle"
                                                                                     : "diagram-normalize";
    const auto r = cli::run({cmd, name + ".json"});
    if (r.exit_code == cli::kOk && doc.contains("expect") && subset_of(doc["expect"], json::parse(r.output)))
      ++passed;
    else
      failed.push_back(name);
  }
  std::string detail = std::to_string(passed) + "/" + std::to_string(list.size()) + " bundled fixtures match expect";
  for (const auto& n : failed) detail += " [" + n + "]";
  return {failed.empty() && passed > 0, detail};
}

Outcome euler_balance(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AmbientSpec x;
  x.orientable = true;
  x.simply_connected = true;
  x.boundary_nonempty = true;
  x.h2_f2 = AbelianGroup::f2(0);
  const auto zero = HomologyClass::zero(AbelianGroup::f2(0));
  int disagreements = 0, twist_changes = 0, yes = 0;

  auto make_link = [&](const std::string& prefix) {
    std::vector<std::string> names;
    const auto n = oracle::uniform(rng, 1, 3);
    for (std::int64_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
    return Link(names, LinkAmbient::S3);
  };
  auto offsets = [&](const Link& l) {
    std::map<std::string, std::int64_t> m;
    for (const auto& c : l.components()) m[c] = oracle::uniform(rng, -6, 6);
    return m;
  };
  auto surface = [](const std::string& id, const Link& l, const Framing& base, std::int64_t e_base) {
    SurfaceSpec s;
    s.id = id;
    s.boundary_ambient = LinkAmbient::S3;
    ComponentSpec c;
    c.id = id + "c";
    c.boundary = l.components();
    c.euler_characteristic = 2 - static_cast<std::int64_t>(c.boundary.size());
    c.rel_euler = RelEulerDatum{id, base, e_base};
    s.components.push_back(c);
    return s;
  };

  for (int k = 0; k < count; ++k) {
    const Link l0 = make_link("K"), l1 = make_link("J");
    const Framing base0(l0, offsets(l0)), base1(l1, offsets(l1));
    const auto ea = oracle::uniform(rng, -10, 10), eb = oracle::uniform(rng, -10, 10);
    BoundaryCobordismSpec z;
    z.from_link = l0;
    z.to_link = l1;
    z.from_framing = Framing(l0, offsets(l0));
    z.to_framing = Framing(l1, offsets(l1));
    z.class_mod2 = zero;
    // Direct evaluation of the Euler numbers at s0 and s1.
    std::int64_t e0 = ea, e1 = eb;
    for (const auto& c : l0.components()) e0 += z.from_framing.offset(c) - base0.offset(c);
    for (const auto& c : l1.components()) e1 += z.to_framing.offset(c) - base1.offset(c);
    z.e_z = oracle::coin(rng) ? e1 - e0 : oracle::uniform(rng, -10, 10);
    const bool expect = e1 == e0 + z.e_z;
    const auto a = surface("A", l0, base0, ea), b = surface("B", l1, base1, eb);
    const auto v = decide_extends_cobordism(x, a, b, z);
    if ((v.answer == Answer::Yes) != expect) ++disagreements;
    if (expect) ++yes;

    // Twist every framing by a common n. The surfaces' Euler numbers at the
    // new framings shift by n per boundary component; Z sees the incoming
    // end reversed.
    const auto n = oracle::uniform(rng, -5, 5);
    auto z2 = z;
    for (const auto& c : l0.components()) z2.from_framing = twist(z2.from_framing, c, n);
    for (const auto& c : l1.components()) z2.to_framing = twist(z2.to_framing, c, n);
    const auto k0 = static_cast<std::int64_t>(l0.components().size());
    const auto k1 = static_cast<std::int64_t>(l1.components().size());
    z2.e_z = z.e_z + n * (k1 - k0);
    Framing base0n = base0, base1n = base1;
    for (const auto& c : l0.components()) base0n = twist(base0n, c, n);
    for (const auto& c : l1.components()) base1n = twist(base1n, c, n);
    const auto a2 = surface("A", l0, base0n, ea + n * k0), b2 = surface("B", l1, base1n, eb + n * k1);
    if (decide_extends_cobordism(x, a2, b2, z2).answer != v.answer) ++twist_changes;
    if (decide_extends_cobordism(x, a, b, z2).answer != v.answer) ++twist_changes;
  }
  std::ostringstream os;
  os << count << " triples (" << yes << " balanced), " << disagreements << " disagreements with e1 = e0 + eZ, "
     << twist_changes << " verdict changes under common twists";
  return {disagreements == 0 && twist_changes == 0, os.str()};
}

Outcome snf(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int failures = 0, minors_checked = 0;
  for (int k = 0; k < count; ++k) {
    const auto r = static_cast<std::size_t>(oracle::uniform(rng, 1, 8));
    const auto c = static_cast<std::size_t>(oracle::uniform(rng, 1, 8));
    const auto a = oracle::random_matrix(rng, r, c, 9);
    const auto f = smith_normal_form(a);
    bool ok = f.u * f.d * f.v == a;
    ok = ok && abs(oracle::determinant(f.u)) == 1 && abs(oracle::determinant(f.v)) == 1;
    const std::size_t m = std::min(r, c);
    for (std::size_t i = 0; i < r && ok; ++i)
      for (std::size_t j = 0; j < c && ok; ++j)
        if (i != j && f.d(i, j) != 0) ok = false;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (f.d(i, i) < 0) ok = false;
      if (i + 1 < m && ok) {
        const Integer& x = f.d(i, i);
        const Integer& y = f.d(i + 1, i + 1);
        ok = x == 0 ? y == 0 : y % x == 0;
      }
    }
    if (ok && r <= 4 && c <= 4) {
      ++minors_checked;
      std::vector<Integer> diag;
      for (std::size_t i = 0; i < m; ++i) diag.push_back(f.d(i, i));
      ok = diag == oracle::invariant_factors_by_minors(a);
    }
    if (!ok) ++failures;
  }
  std::ostringstream os;
  os << count << " matrices up to 8x8 (" << minors_checked << " against gcd of minors), " << failures << " failures";
  return {failures == 0, os.str()};
}

Outcome implication_lattice(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int violations = 0, internal = 0;
  std::size_t checked = 0;
  std::map<std::string, int> fired;
  for (int k = 0; k < count; ++k) {
    const auto q = oracle::random_instance(rng);
    try {
      const auto report = consistency_audit(q);
      violations += static_cast<int>(report.violations.size());
      checked += report.checked.size();
      for (const auto& c : report.checked) ++fired[c];
    } catch (const InternalError&) {
      ++internal;
    }
  }
  std::ostringstream os;
  os << count << " instances, " << checked << " implications evaluated (";
  bool first = true;
  for (const auto& [k, n] : fired) {
    os << (first ? "" : "; ") << k << ": " << n;
    first = false;
  }
  os << "), " << violations << " violations, " << internal << " internal errors";
  return {violations == 0 && internal == 0 && fired.size() >= 3, os.str()};
}

struct HomotopyRun {
  int finger_violations = 0;
  int cusp_literal_violations = 0;  // invariant expected to move by exactly 2
  int cusp_residue_violations = 0;    // e and 2 self each move by 2 mod 4, invariant fixed
};

HomotopyRun homotopy(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HomotopyRun r;
  for (int k = 0; k < count; ++k) {
    const auto e = oracle::uniform(rng, -200, 200);
    const auto self = oracle::uniform(rng, 0, 200);
    const auto before = homotopy_invariant(e, self);
    if (homotopy_invariant(e, self + 2) != before) ++r.finger_violations;
    const std::int64_t step = oracle::coin(rng) ? 2 : -2;
    const auto after = homotopy_invariant(e + step, self + 1);
    if (positive_mod(after - before, 4) != 2) ++r.cusp_literal_violations;
    const bool e_moves = positive_mod(e + step - e, 4) == 2;
    const bool self_moves = positive_mod(2 * (self + 1) - 2 * self, 4) == 2;
    if (!e_moves || !self_moves || after != before) ++r.cusp_residue_violations;
  }
  return r;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  int failures = 0;
  auto report = [&](const std::string& name, const Outcome& o, double secs) {
    std::printf("%s %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  auto t = Clock::now();
  const auto dr = run_diagrams(10000, 1);
  const double diagram_secs = seconds_since(t);
  {
    std::ostringstream os;
    os << dr.instances << " diagrams, " << dr.successes << " normalized, " << dr.infeasible << " infeasible; "
       << dr.oracle_checked << " outputs re-verified by oracle_assign, " << dr.summed << " by direct summation; "
       << dr.mismatches << " mismatches";
    report("oracle_equivalence", {dr.mismatches == 0 && diagram_secs < 30.0, os.str()}, diagram_secs);
  }
  {
    std::ostringstream os;
    os << dr.infeasible << " infeasible diagrams, " << dr.certificate_failures
       << " assignable after at most 2 finger moves";
    report("infeasibility_certification", {dr.certificate_failures == 0 && dr.infeasible > 0, os.str()}, 0.0);
  }
  {
    std::ostringstream os;
    os << dr.replays << " traces replayed, " << dr.replay_failures << " failures";
    report("trace_replay", {dr.replay_failures == 0 && dr.replays > 0, os.str()}, 0.0);
  }

  t = Clock::now();
  {
    const auto o = move_invariance(100000, 2);
    report("move_invariance", o, seconds_since(t));
  }

  t = Clock::now();
  {
    const auto o = reference_fixtures();
    report("reference_fixtures", o, seconds_since(t));
  }

  t = Clock::now();
  {
    const auto o = fixture_library();
    report("fixture_library", o, seconds_since(t));
  }

  t = Clock::now();
  {
    const auto o = euler_balance(10000, 3);
    report("euler_balance", o, seconds_since(t));
  }

  t = Clock::now();
  {
    auto o = snf(1000, 4);
    const double secs = seconds_since(t);
    if (secs >= 10.0) {
      o.pass = false;
      o.detail += ", over the 10 s budget";
    }
    report("snf", o, secs);
  }

  t = Clock::now();
  {
    const auto o = implication_lattice(10000, 5);
    report("implication_lattice", o, seconds_since(t));
  }

  t = Clock::now();
  const auto hr = homotopy(100000, 6);
  const double homotopy_secs = seconds_since(t);
  {
    std::ostringstream os;
    os << "100000 finger simulations, " << hr.finger_violations << " violations; 100000 cusp simulations, "
       << hr.cusp_literal_violations << " where (e - 2 self) mod 4 did not move by exactly 2";
    report("homotopy_invariant", {hr.finger_violations == 0 && hr.cusp_literal_violations == 0, os.str()},
           homotopy_secs);
  }
  {
    std::ostringstream os;
    os << "100000 cusp simulations, " << hr.cusp_residue_violations
       << " where e mod 4 or 2 self mod 4 failed to move by 2 or (e - 2 self) mod 4 changed";
    report("homotopy_invariant_cusp_residues", {hr.cusp_residue_violations == 0, os.str()}, 0.0);
  }

  const double total = seconds_since(start);
  {
    std::ostringstream os;
    os << "acceptance run took " << total << " s";
    report("runtime", {total < 60.0, os.str()}, total);
  }
  return failures == 0 ? 0 : 1;
}
