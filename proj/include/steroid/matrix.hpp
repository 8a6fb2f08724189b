#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include "steroid/errors.hpp"

namespace steroid {

/// Dense column-major matrix. Minimal on purpose: the library's kernels index
/// it directly and no general linear-algebra surface is exposed.
template <std::floating_point T = double>
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t m) {
    Matrix id(m, m);
    for (std::size_t i = 0; i < m; ++i) id(i, i) = T(1);
    return id;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  /// Copy of column j.
  std::vector<T> col(std::size_t j) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(j * rows_),
                          data_.begin() + static_cast<std::ptrdiff_t>((j + 1) * rows_));
  }

  T frobenius_norm() const {
    T s = 0;
    for (const T& v : data_) s += v * v;
    return std::sqrt(s);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Matrix-vector product y = A x.
template <std::floating_point T>
std::vector<T> matvec(const Matrix<T>& a, const std::vector<T>& x) {
  if (x.size() != a.cols())
    throw ShapeError("matvec: vector length " + std::to_string(x.size()) +
                     " does not match " + std::to_string(a.cols()) + " columns");
  std::vector<T> y(a.rows(), T(0));
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const T xj = x[j];
    if (xj == T(0)) continue;
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += a(i, j) * xj;
  }
  return y;
}

template <std::floating_point T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <std::floating_point T>
T norm2(const std::vector<T>& a) {
  T s = 0;
  for (const T& v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace steroid
