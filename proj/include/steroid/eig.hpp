#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "steroid/errors.hpp"
#include "steroid/matrix.hpp"

namespace steroid {

/// Symmetric eigendecomposition A = V diag(lambda) V^T.
///
/// Guarantees:
///  - eigenvalues sorted by decreasing |lambda|; ties broken by larger signed
///    value, then by original position;
///  - eigenvector columns have unit norm (within 1e-12) and are pairwise
///    orthogonal (within 1e-10);
///  - each column's largest-|entry| component is positive (ties: the lowest
///    such index decides), fixing the sign deterministically;
///  - reconstruction residual max_i ||A v_i - lambda_i v_i|| stays below
///    max(1, |lambda_max|) * m * eps * c with c = 32.
template <std::floating_point T>
struct EigResult {
  std::vector<T> eigenvalues;
  Matrix<T> eigenvectors;  ///< column i pairs with eigenvalues[i]
  T zero_tol;              ///< default threshold: m * eps * max|lambda|
};

namespace detail {

template <std::floating_point T>
T off_diagonal_norm(const Matrix<T>& a) {
  T s = 0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

template <std::floating_point T>
void fix_column_sign(Matrix<T>& v, std::size_t j) {
  std::size_t arg = 0;
  T best = std::abs(v(0, j));
  for (std::size_t i = 1; i < v.rows(); ++i) {
    const T a = std::abs(v(i, j));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (v(arg, j) < T(0))
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver. The input must be square, finite, and symmetric
/// within 1e-8 * max(1, max|entry|); it is symmetrized by averaging before
/// iteration. Sweeps are row-cyclic; convergence is declared when the
/// off-diagonal Frobenius norm drops to m * eps * ||A||_F, and more than 100
/// sweeps raise NumericError.
template <std::floating_point T>
EigResult<T> sym_eig(const Matrix<T>& a) {
  if (!a.square())
    throw ShapeError("sym_eig: matrix is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + ", expected square");
  const std::size_t m = a.rows();
  if (m == 0) throw ShapeError("sym_eig: empty matrix");

  T max_abs = 0;
  for (const T& x : a.data()) {
    if (!std::isfinite(x)) throw NumericError("sym_eig: non-finite entry");
    max_abs = std::max(max_abs, std::abs(x));
  }
  T asym = 0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = j + 1; i < m; ++i)
      asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
  if (asym > T(1e-8) * std::max(T(1), max_abs))
    throw SymmetryError("sym_eig: asymmetry " + std::to_string(asym) +
                        " exceeds tolerance");

  Matrix<T> w(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) w(i, j) = (a(i, j) + a(j, i)) / T(2);

  const T norm = w.frobenius_norm();
  const T eps = std::numeric_limits<T>::epsilon();
  const T threshold = static_cast<T>(m) * eps * norm;

  Matrix<T> v = Matrix<T>::identity(m);
  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (detail::off_diagonal_norm(w) <= threshold) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const T apq = w(p, q);
        if (apq == T(0)) continue;
        const T theta = (w(q, q) - w(p, p)) / (T(2) * apq);
        const T sign = theta < T(0) ? T(-1) : T(1);
        const T t = sign / (std::abs(theta) + std::sqrt(theta * theta + T(1)));
        const T c = T(1) / std::sqrt(t * t + T(1));
        const T s = t * c;
        const T wpp = w(p, p);
        const T wqq = w(q, q);
        w(p, p) = wpp - t * apq;
        w(q, q) = wqq + t * apq;
        w(p, q) = w(q, p) = T(0);
        for (std::size_t k = 0; k < m; ++k) {
          if (k == p || k == q) continue;
          const T wkp = w(k, p);
          const T wkq = w(k, q);
          w(k, p) = w(p, k) = c * wkp - s * wkq;
          w(k, q) = w(q, k) = s * wkp + c * wkq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const T vkp = v(k, p);
          const T vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && detail::off_diagonal_norm(w) > threshold)
    throw NumericError("sym_eig: no convergence within 100 sweeps");

  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<T> diag(m);
  for (std::size_t i = 0; i < m; ++i) diag[i] = w(i, i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    const T ai = std::abs(diag[i]);
    const T aj = std::abs(diag[j]);
    if (ai != aj) return ai > aj;
    if (diag[i] != diag[j]) return diag[i] > diag[j];
    return i < j;
  });

  EigResult<T> out;
  out.eigenvalues.resize(m);
  out.eigenvectors = Matrix<T>(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    out.eigenvalues[j] = diag[idx[j]];
    for (std::size_t i = 0; i < m; ++i) out.eigenvectors(i, j) = v(i, idx[j]);
    detail::fix_column_sign(out.eigenvectors, j);
  }
  out.zero_tol = static_cast<T>(m) * eps * std::abs(out.eigenvalues[0]);
  return out;
}

/// Mask of eigenvalues that count as numerically zero: |lambda_i| <= tol,
/// with tol = result.zero_tol unless overridden.
template <std::floating_point T>
std::vector<bool> numerical_zero_mask(const EigResult<T>& eig,
                                      std::optional<T> tol_override = {}) {
  const T tol = tol_override ? *tol_override : eig.zero_tol;
  std::vector<bool> mask(eig.eigenvalues.size());
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
    mask[i] = std::abs(eig.eigenvalues[i]) <= tol;
  return mask;
}

}  // namespace steroid
