#include "surfcob/homology.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace surfcob {

BitMatrix reduce_mod2(const IntMatrix& m) {
  BitMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Bit(m(i, j));
  return out;
}

namespace {

using boost::multiprecision::abs;

template <class T>
T magnitude(const T& x) {
  return abs(x);
}

/// Elimination state with A = u * d * v and d = uinv * A * vinv throughout.
template <class T>
struct SmithWork {
  Matrix<T> d, u, uinv, v, vinv;
  std::size_t rank = 0;

  explicit SmithWork(const Matrix<T>& a)
      : d(a),
        u(Matrix<T>::identity(a.rows())),
        uinv(Matrix<T>::identity(a.rows())),
        v(Matrix<T>::identity(a.cols())),
        vinv(Matrix<T>::identity(a.cols())) {}

  void swap_rows(std::size_t a, std::size_t b) {
    d.swap_rows(a, b);
    u.swap_cols(a, b);
    uinv.swap_rows(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    d.swap_cols(a, b);
    v.swap_rows(a, b);
    vinv.swap_cols(a, b);
  }
  // d.row[i] += c * d.row[j]
  void add_row(std::size_t i, std::size_t j, const T& c) {
    d.add_row(i, j, c);
    u.add_col(j, i, -c);
    uinv.add_row(i, j, c);
  }
  // d.col[i] += c * d.col[j]
  void add_col(std::size_t i, std::size_t j, const T& c) {
    d.add_col(i, j, c);
    v.add_row(j, i, -c);
    vinv.add_col(i, j, c);
  }
  void negate_row(std::size_t i) {
    d.negate_row(i);
    u.negate_col(i);
    uinv.negate_row(i);
  }

  std::optional<std::pair<std::size_t, std::size_t>> smallest_pivot(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    T best_mag(0);
    for (std::size_t i = t; i < d.rows(); ++i)
      for (std::size_t j = t; j < d.cols(); ++j) {
        if (is_zero(d(i, j))) continue;
        T m = magnitude(d(i, j));
        if (!best || m < best_mag) {
          best = {i, j};
          best_mag = m;
        }
      }
    return best;
  }

  void run() {
    const std::size_t limit = std::min(d.rows(), d.cols());
    for (std::size_t t = 0; t < limit; ++t) {
      for (;;) {
        auto pivot = smallest_pivot(t);
        if (!pivot) {
          rank = t;
          return;
        }
        swap_rows(t, pivot->first);
        swap_cols(t, pivot->second);
        const T p = d(t, t);
        bool clean = true;
        for (std::size_t i = t + 1; i < d.rows(); ++i) {
          if (is_zero(d(i, t))) continue;
          add_row(i, t, -(d(i, t) / p));
          if (!is_zero(d(i, t))) clean = false;
        }
        for (std::size_t j = t + 1; j < d.cols(); ++j) {
          if (is_zero(d(t, j))) continue;
          add_col(j, t, -(d(t, j) / p));
          if (!is_zero(d(t, j))) clean = false;
        }
        if (!clean) continue;
        bool divisible = true;
        for (std::size_t i = t + 1; i < d.rows() && divisible; ++i)
          for (std::size_t j = t + 1; j < d.cols(); ++j)
            if (!is_zero(d(i, j) % p)) {
              add_row(t, i, T(1));
              divisible = false;
              break;
            }
        if (!divisible) continue;
        if (d(t, t) < T(0)) negate_row(t);
        break;
      }
    }
    rank = limit;
  }
};

void check_size(std::size_t rows, std::size_t cols) {
  if (rows > kMaxDenseDimension || cols > kMaxDenseDimension) {
    std::ostringstream os;
    os << "matrix " << rows << "x" << cols << " exceeds the dense limit of " << kMaxDenseDimension;
    throw ValidationError("too_large", os.str());
  }
}

template <class T>
Matrix<T> convert(const IntMatrix& m);

template <>
Matrix<Integer> convert<Integer>(const IntMatrix& m) {
  return m;
}

template <>
Matrix<Bit> convert<Bit>(const IntMatrix& m) {
  return reduce_mod2(m);
}

Integer to_integer(const Integer& x) { return x; }
Integer to_integer(Bit b) { return Integer(b.value()); }

/// Everything needed to put a cycle in H_n coordinates, over Z or F2.
template <class T>
struct HomologyBasis {
  std::size_t chain_rank = 0;   // dim C_n
  std::size_t cycle_start = 0;  // rank of d_n; kernel coordinates start here
  Matrix<T> v;                  // y = v z; y[cycle_start..] are kernel coordinates
  Matrix<T> vinv;               // columns cycle_start.. span the cycles
  Matrix<T> quotient_u;         // kernel coords = quotient_u * (quotient coords)
  Matrix<T> quotient_uinv;
  std::vector<T> quotient_diag;  // diagonal of the Smith form of the boundary image
  std::size_t quotient_rank = 0;
  // Positions (into the quotient coordinates) of the free and torsion generators.
  std::vector<std::size_t> free_slots;
  std::vector<std::size_t> torsion_slots;

  std::size_t kernel_rank() const { return chain_rank - cycle_start; }

  std::vector<T> kernel_coords(const std::vector<T>& z) const {
    std::vector<T> y = v.apply(z);
    return std::vector<T>(y.begin() + static_cast<std::ptrdiff_t>(cycle_start), y.end());
  }

  std::vector<T> quotient_coords(const std::vector<T>& z) const { return quotient_uinv.apply(kernel_coords(z)); }

  /// A cycle representing the generator at quotient slot `slot`.
  std::vector<T> representative(std::size_t slot) const {
    std::vector<T> z(chain_rank, T(0));
    for (std::size_t a = 0; a < kernel_rank(); ++a) {
      const T& coeff = quotient_u(a, slot);
      if (is_zero(coeff)) continue;
      for (std::size_t row = 0; row < chain_rank; ++row) z[row] += coeff * vinv(row, cycle_start + a);
    }
    return z;
  }
};

template <class T>
HomologyBasis<T> compute_basis(const ChainComplex& c, int n) {
  c.validate();
  HomologyBasis<T> basis;
  basis.chain_rank = c.rank(n);
  SmithWork<T> outgoing(convert<T>(c.boundary_map(n)));
  outgoing.run();
  basis.cycle_start = outgoing.rank;
  basis.v = outgoing.v;
  basis.vinv = outgoing.vinv;

  const Matrix<T> incoming = convert<T>(c.boundary_map(n + 1));
  const Matrix<T> image = basis.v * incoming;
  Matrix<T> image_kernel(basis.kernel_rank(), incoming.cols());
  for (std::size_t i = 0; i < basis.kernel_rank(); ++i)
    for (std::size_t j = 0; j < incoming.cols(); ++j) image_kernel(i, j) = image(basis.cycle_start + i, j);
  for (std::size_t i = 0; i < basis.cycle_start; ++i)
    for (std::size_t j = 0; j < incoming.cols(); ++j)
      if (!is_zero(image(i, j))) throw InternalError("boundaries are not cycles after validation");

  SmithWork<T> quotient(image_kernel);
  quotient.run();
  basis.quotient_u = quotient.u;
  basis.quotient_uinv = quotient.uinv;
  basis.quotient_rank = quotient.rank;
  for (std::size_t i = 0; i < quotient.rank; ++i) basis.quotient_diag.push_back(quotient.d(i, i));
  for (std::size_t i = quotient.rank; i < basis.kernel_rank(); ++i) basis.free_slots.push_back(i);
  for (std::size_t i = 0; i < quotient.rank; ++i)
    if (!(basis.quotient_diag[i] == T(1))) basis.torsion_slots.push_back(i);
  return basis;
}

AbelianGroup group_of(const HomologyBasis<Integer>& b) {
  std::vector<Integer> factors;
  for (std::size_t slot : b.torsion_slots) factors.push_back(b.quotient_diag[slot]);
  return AbelianGroup(b.free_slots.size(), std::move(factors));
}

AbelianGroup group_of(const HomologyBasis<Bit>& b) { return AbelianGroup::f2(b.free_slots.size()); }

template <class T>
std::vector<Integer> class_coords(const HomologyBasis<T>& b, const std::vector<T>& z) {
  const std::vector<T> w = b.quotient_coords(z);
  std::vector<Integer> coords;
  for (std::size_t slot : b.free_slots) coords.push_back(to_integer(w[slot]));
  for (std::size_t slot : b.torsion_slots) coords.push_back(to_integer(w[slot]));
  return coords;
}

template <class T>
std::vector<T> convert_vector(const std::vector<Integer>& z);

template <>
std::vector<Integer> convert_vector<Integer>(const std::vector<Integer>& z) {
  return z;
}

template <>
std::vector<Bit> convert_vector<Bit>(const std::vector<Integer>& z) {
  std::vector<Bit> out;
  out.reserve(z.size());
  for (const auto& x : z) out.emplace_back(x);
  return out;
}

template <class T>
HomologyClass class_of_cycle_impl(const ChainComplex& c, const std::vector<Integer>& z, int n) {
  if (z.size() != c.rank(n)) {
    std::ostringstream os;
    os << "cycle has length " << z.size() << " but C_" << n << " has rank " << c.rank(n);
    throw ValidationError("dimension_mismatch", os.str());
  }
  const std::vector<T> zt = convert_vector<T>(z);
  const std::vector<T> bz = convert<T>(c.boundary_map(n)).apply(zt);
  if (std::any_of(bz.begin(), bz.end(), [](const T& x) { return !is_zero(x); })) {
    std::ostringstream os;
    os << "not a cycle: boundary is [";
    for (std::size_t i = 0; i < bz.size(); ++i) os << (i ? "," : "") << bz[i];
    os << "]";
    throw ValidationError("non_cycle", os.str());
  }
  const HomologyBasis<T> basis = compute_basis<T>(c, n);
  return HomologyClass(group_of(basis), class_coords(basis, zt));
}

Integer floor_mod(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  check_size(a.rows(), a.cols());
  SmithWork<Integer> work(a);
  work.run();
  return SmithForm{std::move(work.u), std::move(work.d), std::move(work.v)};
}

std::vector<Integer> smith_diagonal(const IntMatrix& a) {
  const SmithForm f = smith_normal_form(a);
  std::vector<Integer> diag;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) diag.push_back(f.d(i, i));
  return diag;
}

AbelianGroup::AbelianGroup(std::size_t free_rank, std::vector<Integer> invariant_factors)
    : free_rank_(free_rank), factors_(std::move(invariant_factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 2)
      throw ValidationError("bad_invariant_factor", "invariant factors must be at least 2");
    if (i > 0 && factors_[i] % factors_[i - 1] != 0)
      throw ValidationError("bad_invariant_factor", "invariant factors must form a divisibility chain");
  }
}

AbelianGroup AbelianGroup::f2(std::size_t dimension) {
  return AbelianGroup(0, std::vector<Integer>(dimension, Integer(2)));
}

bool AbelianGroup::is_f2_space() const {
  return free_rank_ == 0 && std::all_of(factors_.begin(), factors_.end(), [](const Integer& d) { return d == 2; });
}

std::size_t AbelianGroup::f2_dimension() const {
  if (!is_f2_space()) throw ValidationError("not_f2", "group is not an F2 vector space");
  return factors_.size();
}

Integer AbelianGroup::modulus(std::size_t i) const {
  if (i < free_rank_) return 0;
  return factors_.at(i - free_rank_);
}

HomologyClass::HomologyClass(AbelianGroup group, std::vector<Integer> coords)
    : group_(std::move(group)), coords_(std::move(coords)) {
  if (coords_.size() != group_.coordinate_count()) {
    std::ostringstream os;
    os << "class has " << coords_.size() << " coordinates, group needs " << group_.coordinate_count();
    throw ValidationError("dimension_mismatch", os.str());
  }
  for (std::size_t i = group_.free_rank(); i < coords_.size(); ++i) coords_[i] = floor_mod(coords_[i], group_.modulus(i));
}

HomologyClass HomologyClass::zero(const AbelianGroup& group) {
  return HomologyClass(group, std::vector<Integer>(group.coordinate_count(), Integer(0)));
}

bool HomologyClass::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Integer& x) { return x.is_zero(); });
}

HomologyClass HomologyClass::operator+(const HomologyClass& other) const {
  if (!(group_ == other.group_)) throw ValidationError("group_mismatch", "adding classes of different groups");
  std::vector<Integer> sum = coords_;
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += other.coords_[i];
  return HomologyClass(group_, std::move(sum));
}

HomologyClass HomologyClass::operator-() const { return scaled(-1); }

HomologyClass HomologyClass::scaled(const Integer& k) const {
  std::vector<Integer> out = coords_;
  for (auto& x : out) x *= k;
  return HomologyClass(group_, std::move(out));
}

bool classes_equal(const HomologyClass& a, const HomologyClass& b) {
  if (!(a.group() == b.group())) throw ValidationError("group_mismatch", "classes live in different groups");
  return a.coords() == b.coords();
}

std::size_t ChainComplex::rank(int n) const {
  std::optional<std::size_t> r;
  auto merge = [&](std::size_t v, const char* source) {
    if (r && *r != v) {
      std::ostringstream os;
      os << "inconsistent rank for C_" << n << " (" << source << " says " << v << ", other data says " << *r << ")";
      throw ValidationError("rank_mismatch", os.str());
    }
    r = v;
  };
  if (auto it = boundary.find(n); it != boundary.end()) merge(it->second.cols(), "columns of d_n");
  if (auto it = boundary.find(n + 1); it != boundary.end()) merge(it->second.rows(), "rows of d_{n+1}");
  if (auto it = dims.find(n); it != dims.end()) merge(it->second, "dims");
  return r.value_or(0);
}

IntMatrix ChainComplex::boundary_map(int n) const {
  if (auto it = boundary.find(n); it != boundary.end()) return it->second;
  return IntMatrix(rank(n - 1), rank(n));
}

void ChainComplex::validate() const {
  for (const auto& [n, m] : boundary) {
    check_size(m.rows(), m.cols());
    rank(n);
    rank(n - 1);
  }
  for (const auto& [n, m] : boundary) {
    auto next = boundary.find(n + 1);
    if (next == boundary.end()) continue;
    IntMatrix composite = m * next->second;
    bool zero = ring == Ring::Z ? composite.is_zero_matrix() : reduce_mod2(composite).is_zero_matrix();
    if (!zero) {
      std::ostringstream os;
      os << "d_" << n << " o d_" << n + 1 << " is not zero";
      throw ValidationError("not_a_complex", os.str(), "/boundary_maps/" + std::to_string(n + 1));
    }
  }
}

AbelianGroup homology_of_complex(const ChainComplex& c, int degree) {
  if (c.ring == Ring::Z) return group_of(compute_basis<Integer>(c, degree));
  return group_of(compute_basis<Bit>(c, degree));
}

HomologyClass class_of_cycle(const ChainComplex& c, const std::vector<Integer>& z, int degree) {
  if (c.ring == Ring::Z) return class_of_cycle_impl<Integer>(c, z, degree);
  return class_of_cycle_impl<Bit>(c, z, degree);
}

ReductionMap ReductionMap::canonical(const AbelianGroup& source) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < source.coordinate_count(); ++i) {
    const Integer m = source.modulus(i);
    if (m == 0 || m % 2 == 0) kept.push_back(i);
  }
  ReductionMap map{source, AbelianGroup::f2(kept.size()), IntMatrix(kept.size(), source.coordinate_count())};
  for (std::size_t r = 0; r < kept.size(); ++r) map.matrix(r, kept[r]) = 1;
  return map;
}

ReductionMap reduction_map(const ChainComplex& integral, int degree) {
  if (integral.ring != Ring::Z) throw ValidationError("wrong_ring", "reduction map needs an integral complex");
  const HomologyBasis<Integer> zbasis = compute_basis<Integer>(integral, degree);
  const HomologyBasis<Bit> fbasis = compute_basis<Bit>(integral, degree);
  ReductionMap map{group_of(zbasis), group_of(fbasis), {}};
  map.matrix = IntMatrix(map.target.coordinate_count(), map.source.coordinate_count());
  std::vector<std::size_t> slots = zbasis.free_slots;
  slots.insert(slots.end(), zbasis.torsion_slots.begin(), zbasis.torsion_slots.end());
  for (std::size_t col = 0; col < slots.size(); ++col) {
    const std::vector<Bit> z = convert_vector<Bit>(zbasis.representative(slots[col]));
    const std::vector<Integer> image = class_coords(fbasis, z);
    for (std::size_t row = 0; row < image.size(); ++row) map.matrix(row, col) = image[row];
  }
  return map;
}

HomologyClass mod2_reduce(const HomologyClass& c, const ReductionMap& map) {
  if (!(c.group() == map.source))
    throw ValidationError("dimension_mismatch", "class does not live in the reduction map's source group");
  if (!map.target.is_f2_space()) throw ValidationError("not_f2", "reduction target must be an F2 vector space");
  if (map.matrix.rows() != map.target.coordinate_count() || map.matrix.cols() != map.source.coordinate_count())
    throw ValidationError("dimension_mismatch", "reduction matrix shape does not match its groups");
  return HomologyClass(map.target, map.matrix.apply(c.coords()));
}

}  // namespace surfcob
