#include "surfcob/diagrams.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include "surfcob/errors.hpp"

namespace surfcob {

namespace {

int column_limit(ColumnMode m) { return m == ColumnMode::TwoColumn ? 2 : 3; }

ValidationError illegal(const std::string& what) { return ValidationError("illegal_move", what); }

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

DoublePointDiagram::DoublePointDiagram(ColumnMode mode, std::vector<DiagramComponent> components,
                                       std::vector<DoublePoint> points)
    : mode_(mode), components_(std::move(components)), points_(std::move(points)) {
  std::set<std::string> seen;
  std::vector<bool> used(3, false);
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    if (!seen.insert(c.id).second)
      throw ValidationError("duplicate_component", "component id '" + c.id + "' repeated", "/components/" + std::to_string(k));
    if (c.column == kAllColumns) {
      if (mode_ != ColumnMode::ThreeColumn || components_.size() != 1)
        throw ValidationError("bad_column", "only the sole component of a three-column diagram may span all columns",
                              "/components/" + std::to_string(k) + "/column");
      used.assign(3, true);
    } else if (c.column < 0 || c.column >= column_limit(mode_)) {
      throw ValidationError("bad_column", "column " + std::to_string(c.column) + " out of range",
                            "/components/" + std::to_string(k) + "/column");
    } else {
      used[c.column] = true;
    }
  }
  if (mode_ == ColumnMode::ThreeColumn && !(used[0] && used[1] && used[2]))
    throw ValidationError("empty_column", "three-column diagrams need every column nonempty", "/components");
  std::set<std::string> point_ids;
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (!point_ids.insert(points_[k].id).second)
      throw ValidationError("duplicate_point", "double point id '" + points_[k].id + "' repeated",
                            "/double_points/" + std::to_string(k));
  index();
}

void DoublePointDiagram::index() {
  end_index_.clear();
  end_index_.reserve(points_.size());
  for (std::size_t k = 0; k < points_.size(); ++k) {
    std::array<std::size_t, 2> e{};
    for (int s = 0; s < 2; ++s) {
      const auto& name = points_[k].ends[s];
      auto it = std::find_if(components_.begin(), components_.end(), [&](const auto& c) { return c.id == name; });
      if (it == components_.end())
        throw ValidationError("unknown_component", "double point '" + points_[k].id + "' names unknown component '" + name + "'",
                              "/double_points/" + std::to_string(k) + "/ends/" + std::to_string(s));
      e[s] = static_cast<std::size_t>(it - components_.begin());
    }
    end_index_.push_back(e);
  }
}

std::size_t DoublePointDiagram::component_index(const std::string& id) const {
  for (std::size_t k = 0; k < components_.size(); ++k)
    if (components_[k].id == id) return k;
  throw ValidationError("unknown_component", "no component '" + id + "'");
}

std::size_t DoublePointDiagram::point_index(const std::string& id) const {
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (points_[k].id == id) return k;
  throw ValidationError("unknown_point", "no double point '" + id + "'");
}

int DoublePointDiagram::multiplicity(std::size_t point, std::size_t component) const {
  const auto& e = end_index_[point];
  return (e[0] == component ? 1 : 0) + (e[1] == component ? 1 : 0);
}

std::int64_t DoublePointDiagram::p_total(std::size_t component) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) total += multiplicity(i, component);
  return total;
}

bool DoublePointDiagram::within_column(std::size_t point) const {
  const auto& e = end_index_[point];
  return components_[e[0]].column == components_[e[1]].column;
}

bool DoublePointDiagram::can_finger(std::size_t c, std::size_t d) const {
  const int a = components_[c].column;
  const int b = components_[d].column;
  if (a == kAllColumns || b == kAllColumns) return true;
  return a != b;
}

std::string DoublePointDiagram::fresh_point_id() const {
  std::set<std::string> ids;
  for (const auto& p : points_) ids.insert(p.id);
  for (std::size_t k = points_.size() + 1;; ++k) {
    std::string id = "p" + std::to_string(k);
    if (!ids.count(id)) return id;
  }
}

std::size_t DoublePointDiagram::add_point(std::size_t c, std::size_t d, std::string id) {
  if (id.empty()) id = fresh_point_id();
  for (const auto& p : points_)
    if (p.id == id) throw ValidationError("duplicate_point", "double point id '" + id + "' already used");
  points_.push_back(DoublePoint{id, {components_[c].id, components_[d].id}});
  end_index_.push_back({c, d});
  return points_.size() - 1;
}

std::string DoublePointDiagram::canonical_text() const {
  std::ostringstream os;
  os << (mode_ == ColumnMode::TwoColumn ? "two" : "three") << '|';
  for (const auto& c : components_) os << c.id.size() << ':' << c.id << ',' << c.column << ',' << c.target << ';';
  os << '|';
  for (const auto& p : points_)
    os << p.id.size() << ':' << p.id << ',' << p.ends[0].size() << ':' << p.ends[0] << ',' << p.ends[1].size() << ':'
       << p.ends[1] << ';';
  return os.str();
}

std::int64_t p_count(const DoublePointDiagram& d, const std::string& component) {
  return d.p_total(d.component_index(component));
}

SignTable::SignTable(std::size_t points, std::size_t components, int fill)
    : points_(points), components_(components), v_(points * components, static_cast<std::int8_t>(fill < 0 ? -1 : 1)) {}

void SignTable::set(std::size_t point, std::size_t component, int value) {
  if (value != 1 && value != -1) throw ValidationError("bad_sign", "signs are +1 or -1");
  v_[point * components_ + component] = static_cast<std::int8_t>(value);
}

void SignTable::add_point(int value) {
  for (std::size_t c = 0; c < components_; ++c) v_.push_back(static_cast<std::int8_t>(value < 0 ? -1 : 1));
  ++points_;
}

namespace {

void check_shape(const DoublePointDiagram& d, const SignTable& eps) {
  if (eps.point_count() != d.point_count() || eps.component_count() != d.component_count())
    throw ValidationError("sign_table_shape", "sign table does not cover every (point, component) pair");
}

}  // namespace

std::int64_t component_sum(const DoublePointDiagram& d, const SignTable& eps, std::size_t component) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < d.point_count(); ++i) total += d.multiplicity(i, component) * eps.sign(i, component);
  return total;
}

bool meets_targets(const DoublePointDiagram& d, const SignTable& eps) {
  check_shape(d, eps);
  for (std::size_t c = 0; c < d.component_count(); ++c)
    if (component_sum(d, eps, c) != d.components()[c].target) return false;
  return true;
}

std::string to_string(PointType t) {
  switch (t) {
    case PointType::I: return "I";
    case PointType::II: return "II";
    case PointType::III: return "III";
    case PointType::IV: return "IV";
  }
  return "I";
}

PointType classify_type(const DoublePointDiagram& d, const SignTable& eps, std::size_t point) {
  check_shape(d, eps);
  const std::size_t m = d.component_count();
  bool disagree = false;
  for (std::size_t c = 1; c < m && !disagree; ++c) disagree = eps.sign(point, c) != eps.sign(point, 0);
  if (!disagree) return PointType::I;
  // Only the two endpoints carry P = 1; a self-arc has a single P = 2 entry.
  const auto& e = d.end_indices(point);
  if (e[0] != e[1] && eps.sign(point, e[0]) != eps.sign(point, e[1]))
    return d.within_column(point) ? PointType::IV : PointType::III;
  return PointType::II;
}

PointType classify_type(const DoublePointDiagram& d, const SignTable& eps, const std::string& point) {
  return classify_type(d, eps, d.point_index(point));
}

std::size_t MoveTrace::move_count() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const TraceStep& s) {
    return !std::holds_alternative<AssignSigns>(s.move);
  }));
}

std::uint64_t state_hash(const DoublePointDiagram& d, const SignTable& eps) {
  std::uint64_t h = 14695981039346656037ull;
  auto feed = [&](unsigned char ch) {
    h ^= ch;
    h *= 1099511628211ull;
  };
  for (char ch : d.canonical_text()) feed(static_cast<unsigned char>(ch));
  feed('#');
  for (std::size_t i = 0; i < eps.point_count(); ++i)
    for (std::size_t c = 0; c < eps.component_count(); ++c) feed(eps.sign(i, c) > 0 ? '+' : '-');
  return h;
}

namespace {

void do_finger(DiagramState& st, FingerMove& m) {
  auto& d = st.diagram;
  const std::size_t c = d.component_index(m.c);
  const std::size_t dd = d.component_index(m.d);
  if (!d.can_finger(c, dd))
    throw illegal("finger move between '" + m.c + "' and '" + m.d + "' stays inside one column");
  d.add_point(c, dd, m.plus_point);
  m.plus_point = d.double_points().back().id;
  st.signs.add_point(1);
  d.add_point(c, dd, m.minus_point);
  m.minus_point = d.double_points().back().id;
  st.signs.add_point(-1);
}

void do_swap(DiagramState& st, const SwapSigns& m) {
  const auto& d = st.diagram;
  const std::size_t c = d.component_index(m.component);
  const std::size_t i = d.point_index(m.i);
  const std::size_t j = d.point_index(m.j);
  if (i == j) throw illegal("swap needs two distinct double points");
  if (d.multiplicity(i, c) != d.multiplicity(j, c))
    throw illegal("swap on '" + m.component + "' needs equal multiplicities at '" + m.i + "' and '" + m.j + "'");
  if (st.signs.sign(i, c) != -st.signs.sign(j, c))
    throw illegal("swap on '" + m.component + "' needs opposite signs at '" + m.i + "' and '" + m.j + "'");
  st.signs.flip(i, c);
  st.signs.flip(j, c);
}

void do_swap_double(DiagramState& st, const SwapDouble& m) {
  const auto& d = st.diagram;
  const std::size_t c = d.component_index(m.component);
  const std::size_t i = d.point_index(m.i);
  const std::size_t j = d.point_index(m.j);
  const std::size_t k = d.point_index(m.k);
  if (j == k) throw illegal("double swap needs two distinct single points");
  if (d.multiplicity(i, c) != 2 || d.multiplicity(j, c) != 1 || d.multiplicity(k, c) != 1)
    throw illegal("double swap on '" + m.component + "' needs multiplicities 2, 1, 1");
  const int s = st.signs.sign(i, c);
  if (st.signs.sign(j, c) != -s || st.signs.sign(k, c) != -s)
    throw illegal("double swap on '" + m.component + "' needs the single points signed opposite to the double one");
  st.signs.flip(i, c);
  st.signs.flip(j, c);
  st.signs.flip(k, c);
}

void do_flip(DiagramState& st, const FlipZero& m) {
  const auto& d = st.diagram;
  const std::size_t c = d.component_index(m.component);
  const std::size_t i = d.point_index(m.i);
  if (d.multiplicity(i, c) != 0)
    throw illegal("flip of '" + m.component + "' at '" + m.i + "' needs multiplicity 0");
  st.signs.flip(i, c);
}

}  // namespace

void apply_move(DiagramState& state, Move& move) {
  check_shape(state.diagram, state.signs);
  std::visit(
      [&](auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FingerMove>) {
          do_finger(state, m);
        } else if constexpr (std::is_same_v<M, SwapSigns>) {
          do_swap(state, m);
        } else if constexpr (std::is_same_v<M, SwapDouble>) {
          do_swap_double(state, m);
        } else if constexpr (std::is_same_v<M, FlipZero>) {
          do_flip(state, m);
        } else {
          check_shape(state.diagram, m.signs);
          state.signs = m.signs;
        }
      },
      move);
}

FingerResult finger_move(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& dd) {
  DiagramState st{d, eps};
  Move m = FingerMove{c, dd, {}, {}};
  apply_move(st, m);
  return FingerResult{std::move(st.diagram), std::move(st.signs)};
}

SignTable swap_signs(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& i,
                     const std::string& j) {
  DiagramState st{d, eps};
  Move m = SwapSigns{c, i, j};
  apply_move(st, m);
  return st.signs;
}

SignTable swap_double(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& i,
                      const std::string& j, const std::string& k) {
  DiagramState st{d, eps};
  Move m = SwapDouble{c, i, j, k};
  apply_move(st, m);
  return st.signs;
}

SignTable flip_zero(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& i) {
  DiagramState st{d, eps};
  Move m = FlipZero{c, i};
  apply_move(st, m);
  return st.signs;
}

bool parity_valid(const DoublePointDiagram& d) {
  for (std::size_t c = 0; c < d.component_count(); ++c)
    if (floor_mod(d.components()[c].target - d.p_total(c), 2) != 0) return false;
  return true;
}

bool feasible_three(const DoublePointDiagram& d) {
  std::int64_t total = 0;
  for (const auto& c : d.components()) total += c.target;
  return floor_mod(total - 2 * static_cast<std::int64_t>(d.point_count()), 4) == 0;
}

namespace {

void require_two(const DoublePointDiagram& d) {
  if (d.mode() != ColumnMode::TwoColumn) throw ValidationError("wrong_mode", "operation needs a two-column diagram");
}

}  // namespace

std::int64_t within_column_count(const DoublePointDiagram& d) {
  require_two(d);
  std::int64_t t = 0;
  for (std::size_t i = 0; i < d.point_count(); ++i) t += d.within_column(i) ? 1 : 0;
  return t;
}

std::int64_t column_difference(const DoublePointDiagram& d) {
  require_two(d);
  std::int64_t delta = 0;
  for (const auto& c : d.components()) delta += c.column == 0 ? c.target : -c.target;
  return delta;
}

bool feasible_two(const DoublePointDiagram& d) {
  const std::int64_t t = within_column_count(d);
  const std::int64_t delta = column_difference(d);
  return feasible_three(d) && floor_mod(delta - 2 * t, 4) == 0 && std::abs(delta) <= 2 * t;
}

std::vector<std::string> feasibility_obstructions(const DoublePointDiagram& d) {
  std::vector<std::string> out;
  if (!parity_valid(d)) out.push_back("parity");
  if (!feasible_three(d)) out.push_back("mod4");
  if (d.mode() == ColumnMode::TwoColumn) {
    const std::int64_t t = within_column_count(d);
    const std::int64_t delta = column_difference(d);
    if (floor_mod(delta - 2 * t, 4) != 0 || std::abs(delta) > 2 * t) out.push_back("range");
  }
  return out;
}

std::optional<std::vector<int>> oracle_assign(const DoublePointDiagram& d) {
  const std::size_t n = d.point_count();
  const std::size_t m = d.component_count();
  if (n > kOracleMaxPoints)
    throw ValidationError("too_large", "exhaustive search is limited to " + std::to_string(kOracleMaxPoints) + " double points");
  // cap[i][c]: multiplicity still available to component c from points i..n-1.
  std::vector<std::vector<std::int64_t>> cap(n + 1, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t c = 0; c < m; ++c) cap[i][c] = cap[i + 1][c] + d.multiplicity(i, c);
  std::vector<std::int64_t> residual(m);
  for (std::size_t c = 0; c < m; ++c) residual[c] = d.components()[c].target;
  auto reachable = [&](std::size_t from) {
    for (std::size_t c = 0; c < m; ++c)
      if (std::abs(residual[c]) > cap[from][c] || floor_mod(residual[c] - cap[from][c], 2) != 0) return false;
    return true;
  };
  if (!reachable(0)) return std::nullopt;
  std::vector<int> choice(n, 1);
  std::function<bool(std::size_t)> search = [&](std::size_t i) {
    if (i == n) return true;
    for (int s : {1, -1}) {
      for (std::size_t c = 0; c < m; ++c) residual[c] -= s * d.multiplicity(i, c);
      if (reachable(i + 1)) {
        choice[i] = s;
        if (search(i + 1)) return true;
      }
      for (std::size_t c = 0; c < m; ++c) residual[c] += s * d.multiplicity(i, c);
    }
    return false;
  };
  if (!search(0)) return std::nullopt;
  return choice;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

class Normalizer {
 public:
  Normalizer(const DoublePointDiagram& d, SignTable signs) : st_{d, std::move(signs)} {}

  DiagramState& state() { return st_; }
  MoveTrace& trace() { return trace_; }

  void raise_targets() {
    for (std::size_t c = 0; c < m(); ++c)
      while (d().p_total(c) < std::abs(d().components()[c].target)) finger(c, partner(c));
  }

  void match_mod4() {
    std::vector<std::size_t> bad;
    for (std::size_t c = 0; c < m(); ++c)
      if (floor_mod(d().p_total(c) - d().components()[c].target, 4) != 0) bad.push_back(c);
    if (bad.size() % 2 != 0) throw InternalError("odd number of components off by 2 mod 4");
    for (std::size_t k = 0; k < bad.size(); k += 2) {
      const std::size_t c = bad[k];
      const std::size_t c2 = bad[k + 1];
      if (d().can_finger(c, c2)) {
        finger(c, c2);
      } else {
        const std::size_t mid = partner(c);
        finger(c, mid);
        finger(c2, mid);
      }
    }
  }

  void assign_signs() {
    SignTable table(n(), m(), 1);
    for (std::size_t c = 0; c < m(); ++c) {
      std::int64_t rest = (d().p_total(c) - d().components()[c].target) / 2;
      for (int weight : {2, 1})
        for (std::size_t i = 0; i < n() && rest >= weight; ++i)
          if (d().multiplicity(i, c) == weight) {
            table.set(i, c, -1);
            rest -= weight;
          }
      if (rest != 0) throw InternalError("subset selection failed for component '" + d().components()[c].id + "'");
    }
    record(AssignSigns{std::move(table)});
  }

  void eliminate_type_four() {
    for (;;) {
      const std::size_t i = first_of(PointType::IV);
      if (i == kNone) return;
      const auto& e = d().end_indices(i);
      const std::size_t c = std::min(e[0], e[1]);
      const int x = sign(i, c);
      std::size_t j = kNone;
      for (std::size_t q = 0; q < n() && j == kNone; ++q) {
        if (q == i || d().multiplicity(q, c) != 1 || sign(q, c) != -x) continue;
        const auto& f = d().end_indices(q);
        const std::size_t other = f[0] == c ? f[1] : f[0];
        if (d().can_finger(c, other)) j = q;
      }
      if (j == kNone) j = finger_sign(c, partner(c), -x);
      record(SwapSigns{id(c), pid(i), pid(j)});
    }
  }

  void eliminate_type_three_three_columns() {
    for (;;) {
      const std::size_t i = first_of(PointType::III);
      if (i == kNone) return;
      const auto& e = d().end_indices(i);
      const std::size_t c = col(e[0]) <= col(e[1]) ? e[0] : e[1];
      const int x = sign(i, c);
      const std::size_t j = first_of(PointType::III, i);
      if (j == kNone) throw InternalError("unpaired type III point '" + pid(i) + "'");
      const auto& f = d().end_indices(j);
      const std::size_t dd = sign(j, f[0]) == -x ? f[0] : f[1];
      std::size_t fcomp = kNone;
      for (int column = 0; column < 3 && fcomp == kNone; ++column) {
        if (column == col(c) || column == col(dd)) continue;
        fcomp = lowest_in_column(column);
      }
      if (fcomp == kNone) throw InternalError("no third column available");
      const std::size_t s = find_or_finger(c, fcomp, -x, {i, j});
      const std::size_t t = find_or_finger(dd, fcomp, x, {i, j, s});
      record(SwapSigns{id(c), pid(i), pid(s)});
      record(SwapSigns{id(dd), pid(j), pid(t)});
      record(SwapSigns{id(fcomp), pid(s), pid(t)});
    }
  }

  void eliminate_type_three_two_columns() {
    for (;;) {
      const std::size_t i = first_of(PointType::III);
      if (i == kNone) return;
      const auto [c, c1] = split(i);
      const int x = sign(i, c);
      std::vector<std::size_t> others;
      for (std::size_t q = 0; q < n(); ++q)
        if (q != i && type(q) == PointType::III) others.push_back(q);
      if (others.empty()) throw InternalError("unpaired type III point '" + pid(i) + "'");

      // (a) a partner whose column-0 sign is opposite.
      std::size_t j = kNone;
      for (std::size_t q : others)
        if (sign(q, split(q).first) == -x) {
          j = q;
          break;
        }
      if (j != kNone) {
        const std::size_t dd = split(j).first;
        const std::size_t l = find_or_finger(c1, dd, x, {i, j});
        record(SwapSigns{id(c1), pid(i), pid(l)});
        record(SwapSigns{id(dd), pid(j), pid(l)});
        continue;
      }

      j = others.front();
      const auto [dd, dd1] = split(j);
      // (b) a within-column-0 point carrying sign -x; (c) a within-column-1 point carrying +x.
      for (auto [column, want, a, b] : {std::tuple{0, -x, c1, dd1}, std::tuple{1, x, c, dd}}) {
        const std::size_t l = within_point(column, want);
        if (l == kNone) continue;
        const auto& g = d().end_indices(l);
        const std::size_t fcomp = g[0];
        const std::size_t gcomp = g[1];
        const std::size_t s = find_or_finger(fcomp, a, -want, {i, j, l});
        const std::size_t t = find_or_finger(gcomp, b, -want, {i, j, l, s});
        record(SwapSigns{id(a), pid(i), pid(s)});
        record(SwapSigns{id(b), pid(j), pid(t)});
        if (fcomp == gcomp) {
          record(SwapDouble{id(fcomp), pid(l), pid(s), pid(t)});
        } else {
          record(SwapSigns{id(fcomp), pid(l), pid(s)});
          record(SwapSigns{id(gcomp), pid(l), pid(t)});
        }
        j = kNone;
        break;
      }
      if (j != kNone) throw InternalError("no admissible point to pair type III point '" + pid(i) + "'");
    }
  }

  void clear_type_two() {
    for (std::size_t i = 0; i < n(); ++i) {
      if (type(i) != PointType::II) continue;
      const int ref = sign(i, d().end_indices(i)[0]);
      for (std::size_t c = 0; c < m(); ++c)
        if (d().multiplicity(i, c) == 0 && sign(i, c) != ref) record(FlipZero{id(c), pid(i)});
    }
  }

  std::vector<int> uniform_assignment() {
    std::vector<int> out(n());
    for (std::size_t i = 0; i < n(); ++i) {
      if (type(i) != PointType::I) throw InternalError("point '" + pid(i) + "' is not type I after normalization");
      out[i] = m() == 0 ? 1 : sign(i, 0);
    }
    if (!meets_targets(d(), st_.signs)) throw InternalError("normalized signs miss a component target");
    return out;
  }

 private:
  const DoublePointDiagram& d() const { return st_.diagram; }
  std::size_t n() const { return st_.diagram.point_count(); }
  std::size_t m() const { return st_.diagram.component_count(); }
  int sign(std::size_t i, std::size_t c) const { return st_.signs.sign(i, c); }
  int col(std::size_t c) const { return d().components()[c].column; }
  const std::string& id(std::size_t c) const { return d().components()[c].id; }
  const std::string& pid(std::size_t i) const { return d().double_points()[i].id; }
  PointType type(std::size_t i) const { return classify_type(d(), st_.signs, i); }

  void record(Move move) {
    apply_move(st_, move);
    trace_.steps.push_back(TraceStep{std::move(move), state_hash(st_.diagram, st_.signs)});
  }

  // Indices of the +1 and -1 points just created.
  std::pair<std::size_t, std::size_t> finger(std::size_t c, std::size_t dd) {
    record(FingerMove{id(c), id(dd), {}, {}});
    return {n() - 2, n() - 1};
  }

  std::size_t finger_sign(std::size_t c, std::size_t dd, int want) {
    const auto [plus, minus] = finger(c, dd);
    return want > 0 ? plus : minus;
  }

  std::size_t lowest_in_column(int column) const {
    for (std::size_t c = 0; c < m(); ++c)
      if (col(c) == column) return c;
    return kNone;
  }

  // Finger-move partner: lowest-id component in the lowest admissible column.
  std::size_t partner(std::size_t c) const {
    if (col(c) == kAllColumns) return c;
    for (int column = 0; column < column_limit(d().mode()); ++column) {
      if (column == col(c)) continue;
      const std::size_t p = lowest_in_column(column);
      if (p != kNone) return p;
    }
    throw ValidationError("empty_column", "no component outside the column of '" + id(c) + "' to finger-move with");
  }

  std::size_t first_of(PointType t, std::size_t skip = kNone) const {
    for (std::size_t i = 0; i < n(); ++i)
      if (i != skip && type(i) == t) return i;
    return kNone;
  }

  // Endpoints of a cross-column point as (column 0, column 1).
  std::pair<std::size_t, std::size_t> split(std::size_t i) const {
    const auto& e = d().end_indices(i);
    return col(e[0]) == 0 ? std::pair{e[0], e[1]} : std::pair{e[1], e[0]};
  }

  std::size_t within_point(int column, int want) const {
    for (std::size_t l = 0; l < n(); ++l) {
      const auto& e = d().end_indices(l);
      if (col(e[0]) == column && col(e[1]) == column && sign(l, e[0]) == want) return l;
    }
    return kNone;
  }

  // A point joining a and b (as a multiset) with both endpoint signs `want`,
  // outside `exclude`; created by a finger move when none exists.
  std::size_t find_or_finger(std::size_t a, std::size_t b, int want, std::initializer_list<std::size_t> exclude) {
    for (std::size_t q = 0; q < n(); ++q) {
      if (std::find(exclude.begin(), exclude.end(), q) != exclude.end()) continue;
      const auto& e = d().end_indices(q);
      const bool joins = (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a);
      if (joins && sign(q, a) == want && sign(q, b) == want) return q;
    }
    return finger_sign(a, b, want);
  }

  DiagramState st_;
  MoveTrace trace_;
};

}  // namespace

NormalizeOutcome normalize(const DoublePointDiagram& d, const std::optional<SignTable>& initial) {
  auto obstructions = feasibility_obstructions(d);
  if (!obstructions.empty()) return NormalizeInfeasible{std::move(obstructions)};
  if (initial) {
    check_shape(d, *initial);
    if (!meets_targets(d, *initial))
      throw ValidationError("signs_miss_targets", "initial sign table does not meet the component targets");
  }
  Normalizer work(d, initial ? *initial : SignTable(d.point_count(), d.component_count(), 1));
  if (!initial) {
    work.raise_targets();
    work.match_mod4();
    work.assign_signs();
  }
  work.eliminate_type_four();
  if (d.mode() == ColumnMode::ThreeColumn)
    work.eliminate_type_three_three_columns();
  else
    work.eliminate_type_three_two_columns();
  work.clear_type_two();
  auto assignment = work.uniform_assignment();
  auto& st = work.state();
  return NormalizeSuccess{std::move(st.diagram), std::move(st.signs), std::move(assignment), std::move(work.trace())};
}

DiagramState replay(const DoublePointDiagram& initial, const std::optional<SignTable>& initial_signs,
                    const MoveTrace& trace) {
  DiagramState st{initial, initial_signs ? *initial_signs : SignTable(initial.point_count(), initial.component_count(), 1)};
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    Move move = trace.steps[k].move;
    try {
      apply_move(st, move);
    } catch (const ValidationError& e) {
      throw InternalError("trace step " + std::to_string(k) + " is not legal: " + e.what());
    }
    if (state_hash(st.diagram, st.signs) != trace.steps[k].hash)
      throw InternalError("trace step " + std::to_string(k) + " hash mismatch");
  }
  return st;
}

}  // namespace surfcob

namespace surfcob {

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

std::int64_t between(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace

DoublePointDiagram random_diagram(std::mt19937_64& rng, const RandomDiagramOptions& opts) {
  const bool three = below(rng, 2) == 0;
  const ColumnMode mode = three ? ColumnMode::ThreeColumn : ColumnMode::TwoColumn;
  const int columns = three ? 3 : 2;
  std::vector<DiagramComponent> comps;
  const bool sole = three && below(rng, 8) == 0;
  if (sole) {
    comps.push_back({"C1", kAllColumns, 0});
  } else {
    const std::size_t lo = static_cast<std::size_t>(columns);
    const std::size_t hi = std::max(lo, opts.max_components);
    const std::size_t m = static_cast<std::size_t>(between(rng, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
    for (std::size_t k = 0; k < m; ++k) {
      const int column = k < lo ? static_cast<int>(k) : static_cast<int>(below(rng, columns));
      comps.push_back({"C" + std::to_string(k + 1), column, 0});
    }
    // Shuffle column labels so the low ids are not always in column order.
    for (std::size_t k = comps.size(); k > 1; --k) std::swap(comps[k - 1].column, comps[below(rng, k)].column);
  }
  const std::size_t n = static_cast<std::size_t>(below(rng, opts.max_points + 1));
  std::vector<DoublePoint> points;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = below(rng, comps.size());
    const auto b = below(rng, comps.size());
    points.push_back({"p" + std::to_string(i + 1), {comps[a].id, comps[b].id}});
  }
  DoublePointDiagram shape(mode, comps, points);
  const std::int64_t tmax = opts.max_target;
  const bool from_signs = below(rng, 2) == 0;
  std::vector<int> eps(n);
  for (auto& e : eps) e = below(rng, 2) == 0 ? 1 : -1;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < n; ++i) t += shape.multiplicity(i, c) * eps[i];
    if (!from_signs || std::abs(t) > tmax) {
      t = between(rng, -tmax, tmax);
      // Mostly keep the parity condition so the deeper conditions get exercised.
      if (below(rng, 4) != 0 && floor_mod(t - shape.p_total(c), 2) != 0) t += t < tmax ? 1 : -1;
    }
    comps[c].target = t;
  }
  return DoublePointDiagram(mode, std::move(comps), std::move(points));
}

SignTable random_signs(std::mt19937_64& rng, const DoublePointDiagram& d) {
  SignTable t(d.point_count(), d.component_count(), 1);
  for (std::size_t i = 0; i < d.point_count(); ++i)
    for (std::size_t c = 0; c < d.component_count(); ++c) t.set(i, c, below(rng, 2) == 0 ? 1 : -1);
  return t;
}

}  // namespace surfcob
