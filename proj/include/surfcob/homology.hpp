#pragma once

// Finitely generated abelian groups, Smith normal form, and homology of
// chain complexes over the integers and over the field with two elements.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "surfcob/matrix.hpp"

namespace surfcob {

/// Matrices above this size in either dimension are refused.
inline constexpr std::size_t kMaxDenseDimension = 512;

/// A = U * D * V with U, V unimodular and D diagonal, d1 | d2 | ..., di >= 0.
struct SmithForm {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;
};

/// Pivot rule: smallest nonzero |entry| of the active block, ties broken in
/// row-major order. Deterministic, so downstream class coordinates are too.
SmithForm smith_normal_form(const IntMatrix& a);

/// Diagonal entries of the Smith form (length min(rows, cols)).
std::vector<Integer> smith_diagonal(const IntMatrix& a);

/// Z^free_rank (+) Z/d1 (+) ... (+) Z/dk with d1 | d2 | ... and every di >= 2.
/// Vector spaces over F2 are the special case free_rank = 0, all di = 2.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(std::size_t free_rank, std::vector<Integer> invariant_factors);

  static AbelianGroup f2(std::size_t dimension);

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Integer>& invariant_factors() const { return factors_; }

  /// Length of a coordinate vector: free_rank + number of invariant factors.
  std::size_t coordinate_count() const { return free_rank_ + factors_.size(); }

  bool is_f2_space() const;
  /// Dimension when this is an F2 vector space; throws otherwise.
  std::size_t f2_dimension() const;

  /// Modulus of coordinate i, 0 for a free coordinate.
  Integer modulus(std::size_t i) const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> factors_;
};

/// Element of an AbelianGroup in its standard coordinates. Torsion
/// coordinates are kept reduced into [0, d).
class HomologyClass {
 public:
  HomologyClass() = default;
  HomologyClass(AbelianGroup group, std::vector<Integer> coords);

  static HomologyClass zero(const AbelianGroup& group);

  const AbelianGroup& group() const { return group_; }
  const std::vector<Integer>& coords() const { return coords_; }
  bool is_zero() const;

  HomologyClass operator+(const HomologyClass& other) const;
  HomologyClass operator-() const;
  HomologyClass operator-(const HomologyClass& other) const { return *this + (-other); }
  HomologyClass scaled(const Integer& k) const;

  friend bool operator==(const HomologyClass&, const HomologyClass&) = default;

 private:
  AbelianGroup group_;
  std::vector<Integer> coords_;
};

/// True iff the classes agree after canonical reduction. Throws on group mismatch.
bool classes_equal(const HomologyClass& a, const HomologyClass& b);

enum class Ring { Z, F2 };

/// Boundary maps d_n : C_n -> C_{n-1}, stored as (dim C_{n-1}) x (dim C_n).
/// Degrees without a stored map have the zero map; chain group ranks are
/// inferred from neighbouring maps or taken from `dims`.
struct ChainComplex {
  Ring ring = Ring::Z;
  std::map<int, IntMatrix> boundary;
  std::map<int, std::size_t> dims;

  /// Rank of C_n; throws on inconsistent declarations.
  std::size_t rank(int n) const;
  /// d_n as a matrix, zero when absent.
  IntMatrix boundary_map(int n) const;
  /// Checks rectangularity, size limits and d_n o d_{n+1} = 0 in the ring.
  void validate() const;
};

AbelianGroup homology_of_complex(const ChainComplex& c, int degree);

/// Class of a cycle z in C_degree. Throws ValidationError("non_cycle") carrying
/// d_n z in the message when z is not a cycle.
HomologyClass class_of_cycle(const ChainComplex& c, const std::vector<Integer>& z, int degree);

/// Linear map from an integral group to an F2 group, given on coordinates.
struct ReductionMap {
  AbelianGroup source;
  AbelianGroup target;
  IntMatrix matrix;  // target.coordinate_count() x source.coordinate_count()

  /// G -> G (x) F2: free and even-torsion coordinates map identically, odd
  /// torsion maps to zero.
  static ReductionMap canonical(const AbelianGroup& source);
};

/// Reduction H_n(C; Z) -> H_n(C (x) F2) computed from one integral complex.
ReductionMap reduction_map(const ChainComplex& integral, int degree);

HomologyClass mod2_reduce(const HomologyClass& c, const ReductionMap& map);

}  // namespace surfcob
