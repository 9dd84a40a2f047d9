#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "surfcob/errors.hpp"

namespace surfcob {

using Integer = boost::multiprecision::cpp_int;

/// Element of the field with two elements. Supports the arithmetic the
/// generic elimination code needs, so one algorithm serves both rings.
class Bit {
 public:
  constexpr Bit() = default;
  constexpr Bit(int v) : v_(static_cast<std::uint8_t>(v & 1)) {}  // NOLINT
  explicit Bit(const Integer& v) : v_(v % 2 != 0 ? 1 : 0) {}

  constexpr bool is_one() const { return v_ != 0; }
  constexpr int value() const { return v_; }

  friend constexpr Bit operator+(Bit a, Bit b) { return Bit(a.v_ ^ b.v_); }
  friend constexpr Bit operator-(Bit a, Bit b) { return Bit(a.v_ ^ b.v_); }
  friend constexpr Bit operator*(Bit a, Bit b) { return Bit(a.v_ & b.v_); }
  friend constexpr Bit operator-(Bit a) { return a; }
  // Division by the only unit.
  friend constexpr Bit operator/(Bit a, Bit) { return a; }
  friend constexpr Bit operator%(Bit, Bit) { return Bit(0); }
  Bit& operator+=(Bit o) { v_ ^= o.v_; return *this; }
  Bit& operator-=(Bit o) { v_ ^= o.v_; return *this; }
  friend constexpr bool operator==(Bit a, Bit b) { return a.v_ == b.v_; }
  friend constexpr bool operator<(Bit a, Bit b) { return a.v_ < b.v_; }
  friend std::ostream& operator<<(std::ostream& os, Bit b) { return os << int(b.v_); }

 private:
  std::uint8_t v_ = 0;
};

inline Bit abs(Bit b) { return b; }
inline bool is_zero(Bit b) { return !b.is_one(); }
inline bool is_zero(const Integer& v) { return v.is_zero(); }

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ValidationError("ragged_matrix", "matrix rows have different lengths");
      for (const auto& v : r) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero_matrix() const {
    for (const auto& v : data_)
      if (!is_zero(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("dimension_mismatch", "matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (x.size() != cols_) throw ValidationError("dimension_mismatch", "vector length does not match matrix columns");
    std::vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += c * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& c) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += c * (*this)(src, j);
  }
  // col[dst] += c * col[src]
  void add_col(std::size_t dst, std::size_t src, const T& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += c * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using BitMatrix = Matrix<Bit>;

BitMatrix reduce_mod2(const IntMatrix& m);

}  // namespace surfcob
