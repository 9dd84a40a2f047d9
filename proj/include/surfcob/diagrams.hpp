#pragma once

// Double point diagrams of immersed surfaces and the sign calculus used to
// decide when a spanning surface is almost-extendable.
//
// A diagram records the components of the immersed surface (each placed in a
// column), its transverse double points (an arc joining the two preimages),
// and for every component C a target t_C = e(f(C), s^Z). P^C_i is the number
// of preimages of double point i on C. A sign table holds a unit eps^C_i for
// every (point, component) pair, including pairs with P^C_i = 0.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace surfcob {

enum class ColumnMode { TwoColumn, ThreeColumn };

/// Column value for the lone component of a connected surface in
/// three-column mode; it occupies every column.
inline constexpr int kAllColumns = -1;

struct DiagramComponent {
  std::string id;
  int column = 0;
  std::int64_t target = 0;
};

struct DoublePoint {
  std::string id;
  std::array<std::string, 2> ends;
};

class DoublePointDiagram {
 public:
  DoublePointDiagram() = default;
  /// Validates: unique ids, columns in range for the mode, endpoints declared,
  /// every column nonempty in three-column mode, kAllColumns only for a sole
  /// component.
  DoublePointDiagram(ColumnMode mode, std::vector<DiagramComponent> components, std::vector<DoublePoint> points);

  ColumnMode mode() const { return mode_; }
  const std::vector<DiagramComponent>& components() const { return components_; }
  const std::vector<DoublePoint>& double_points() const { return points_; }
  std::size_t component_count() const { return components_.size(); }
  std::size_t point_count() const { return points_.size(); }

  std::size_t component_index(const std::string& id) const;
  std::size_t point_index(const std::string& id) const;

  /// P^C_i in {0, 1, 2}.
  int multiplicity(std::size_t point, std::size_t component) const;
  /// The two endpoint component indices of a point (equal for a self-arc).
  const std::array<std::size_t, 2>& end_indices(std::size_t point) const { return end_index_[point]; }
  /// Sum of P^C_i over all points.
  std::int64_t p_total(std::size_t component) const;

  /// Both endpoints in one column.
  bool within_column(std::size_t point) const;
  /// C in S_i and D in S_j for some i != j.
  bool can_finger(std::size_t c, std::size_t d) const;

  /// Appends a double point joining c and d and returns its index. An empty
  /// id means fresh_point_id().
  std::size_t add_point(std::size_t c, std::size_t d, std::string id = {});
  std::string fresh_point_id() const;

  /// Canonical one-line text form, used for hashing.
  std::string canonical_text() const;

  friend bool operator==(const DoublePointDiagram& a, const DoublePointDiagram& b) {
    return a.canonical_text() == b.canonical_text();
  }

 private:
  void index();

  ColumnMode mode_ = ColumnMode::TwoColumn;
  std::vector<DiagramComponent> components_;
  std::vector<DoublePoint> points_;
  std::vector<std::array<std::size_t, 2>> end_index_;
};

std::int64_t p_count(const DoublePointDiagram& d, const std::string& component);

/// eps^C_i for every point i and component C, stored row-major by point.
class SignTable {
 public:
  SignTable() = default;
  SignTable(std::size_t points, std::size_t components, int fill = 1);

  std::size_t point_count() const { return points_; }
  std::size_t component_count() const { return components_; }
  int sign(std::size_t point, std::size_t component) const { return v_[point * components_ + component]; }
  void set(std::size_t point, std::size_t component, int value);
  void flip(std::size_t point, std::size_t component) { v_[point * components_ + component] *= -1; }
  /// Appends a point whose entries all equal `value`.
  void add_point(int value);

  friend bool operator==(const SignTable&, const SignTable&) = default;

 private:
  std::size_t points_ = 0;
  std::size_t components_ = 0;
  std::vector<std::int8_t> v_;
};

/// sum_i P^C_i eps^C_i.
std::int64_t component_sum(const DoublePointDiagram& d, const SignTable& eps, std::size_t component);

/// True iff every component sum equals its target.
bool meets_targets(const DoublePointDiagram& d, const SignTable& eps);

enum class PointType { I, II, III, IV };

std::string to_string(PointType t);

PointType classify_type(const DoublePointDiagram& d, const SignTable& eps, std::size_t point);
PointType classify_type(const DoublePointDiagram& d, const SignTable& eps, const std::string& point);

// The legal moves. Each preserves every target and every component sum.

struct FingerMove {
  std::string c, d;
  std::string plus_point, minus_point;  // ids of the two new points
};
/// Exchange eps^C_i and eps^C_j where they differ and P^C_i = P^C_j.
struct SwapSigns {
  std::string component, i, j;
};
/// Flip eps^C_i with P^C_i = 2 together with eps^C_j, eps^C_k where
/// P^C_j = P^C_k = 1 and both equal -eps^C_i.
struct SwapDouble {
  std::string component, i, j, k;
};
/// Negate eps^C_i where P^C_i = 0.
struct FlipZero {
  std::string component, i;
};
/// Replaces the whole sign table; used once to install the initial table
/// built by normalization. Not a move on its own.
struct AssignSigns {
  SignTable signs;
};

using Move = std::variant<FingerMove, SwapSigns, SwapDouble, FlipZero, AssignSigns>;

struct TraceStep {
  Move move;
  std::uint64_t hash = 0;  // state_hash after the move
};

struct MoveTrace {
  std::vector<TraceStep> steps;
  std::size_t move_count() const;  // steps excluding AssignSigns
};

struct DiagramState {
  DoublePointDiagram diagram;
  SignTable signs;
};

/// FNV-1a of the canonical text of diagram and signs.
std::uint64_t state_hash(const DoublePointDiagram& d, const SignTable& eps);

struct FingerResult {
  DoublePointDiagram diagram;
  SignTable signs;
};

FingerResult finger_move(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& dd);
SignTable swap_signs(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& i,
                     const std::string& j);
SignTable swap_double(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& i,
                      const std::string& j, const std::string& k);
SignTable flip_zero(const DoublePointDiagram& d, const SignTable& eps, const std::string& c, const std::string& i);

/// Applies a move in place after checking its preconditions.
void apply_move(DiagramState& state, Move& move);

/// t_C = P^C mod 2 for every component.
bool parity_valid(const DoublePointDiagram& d);
/// sum_C t_C = 2n mod 4.
bool feasible_three(const DoublePointDiagram& d);

/// Number of points with both endpoints in one column (two-column mode).
std::int64_t within_column_count(const DoublePointDiagram& d);
/// sum of targets in column 0 minus sum in column 1 (two-column mode).
std::int64_t column_difference(const DoublePointDiagram& d);
/// |Delta| <= 2T, Delta = 2T mod 4, and feasible_three. Two-column mode only.
bool feasible_two(const DoublePointDiagram& d);

/// Named obstructions among "parity", "mod4", "range"; empty when feasible.
std::vector<std::string> feasibility_obstructions(const DoublePointDiagram& d);

inline constexpr std::size_t kOracleMaxPoints = 24;

/// Lexicographically first (+1 before -1) component-independent vector with
/// sum_i P^C_i eps_i = t_C for every C, searched over all 2^n choices with
/// pruning of branches that cannot reach the targets. n <= kOracleMaxPoints.
std::optional<std::vector<int>> oracle_assign(const DoublePointDiagram& d);

struct NormalizeSuccess {
  DoublePointDiagram diagram;
  SignTable signs;
  std::vector<int> assignment;  // uniform eps_i, one per point of `diagram`
  MoveTrace trace;
};

struct NormalizeInfeasible {
  std::vector<std::string> obstructions;
};

using NormalizeOutcome = std::variant<NormalizeSuccess, NormalizeInfeasible>;

/// Rewrites the diagram by legal moves until every point is type I.
/// Without `initial`, finger moves first make P^C >= |t_C| and
/// P^C = t_C mod 4, then a sign table meeting the targets is installed. With
/// `initial` (which must meet the targets) those stages are skipped.
/// Type IV points are removed first, then type III, then type II.
NormalizeOutcome normalize(const DoublePointDiagram& d, const std::optional<SignTable>& initial = std::nullopt);

/// Replays a trace from the initial state, checking preconditions and the
/// recorded hashes. Throws InternalError on any mismatch.
DiagramState replay(const DoublePointDiagram& initial, const std::optional<SignTable>& initial_signs,
                    const MoveTrace& trace);

struct RandomDiagramOptions {
  std::size_t max_points = 10;
  std::size_t max_components = 5;
  std::int64_t max_target = 8;
};

/// Seeded random diagram with every column nonempty. About half the draws
/// take their targets from a random uniform sign vector, so feasible and
/// infeasible instances both occur often.
DoublePointDiagram random_diagram(std::mt19937_64& rng, const RandomDiagramOptions& opts = {});

/// Random sign table of the right shape.
SignTable random_signs(std::mt19937_64& rng, const DoublePointDiagram& d);

}  // namespace surfcob
