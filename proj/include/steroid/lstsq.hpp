#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steroid/errors.hpp"
#include "steroid/matrix.hpp"

namespace steroid {

template <std::floating_point T>
struct LsqResult {
  std::vector<T> solution;  ///< minimum-norm minimizer of ||X l - b||
  T residual_norm;          ///< ||b - X solution||, recomputed directly
  std::size_t numerical_rank;
  T rank_tol;               ///< threshold under which pivot norms count as zero
};

/// Minimum-norm least squares via Householder QR with column pivoting
/// followed by a reduction of the trapezoid [R11 R12] to [S 0] with
/// reflectors applied from the right. Rank-deficient and underdetermined
/// systems are handled; among all residual minimizers the returned solution
/// has the smallest 2-norm.
///
/// Numerical rank is the number of pivot steps whose remaining column norm
/// exceeds rank_tol; the default rank_tol is
/// max(rows, cols) * eps * (largest initial column norm). Remaining column
/// norms are recomputed from scratch at every step, trading speed for
/// robustness against downdating drift.
template <std::floating_point T>
LsqResult<T> lstsq(const Matrix<T>& x, const std::vector<T>& b,
                   std::optional<T> rank_tol_override = {}) {
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  if (b.size() != m)
    throw ShapeError("lstsq: right-hand side has " + std::to_string(b.size()) +
                     " entries, expected " + std::to_string(m));
  for (const T& v : x.data())
    if (!std::isfinite(v)) throw NumericError("lstsq: non-finite matrix entry");
  for (const T& v : b)
    if (!std::isfinite(v)) throw NumericError("lstsq: non-finite right-hand side");

  LsqResult<T> out;
  out.solution.assign(n, T(0));
  if (n == 0) {
    out.residual_norm = norm2(b);
    out.numerical_rank = 0;
    out.rank_tol = rank_tol_override.value_or(T(0));
    return out;
  }

  Matrix<T> a = x;
  std::vector<T> qtb = b;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  const T eps = std::numeric_limits<T>::epsilon();
  T max_col_norm = 0;
  for (std::size_t j = 0; j < n; ++j) {
    T s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
    max_col_norm = std::max(max_col_norm, std::sqrt(s));
  }
  const T rank_tol = rank_tol_override.value_or(
      static_cast<T>(std::max(m, n)) * eps * max_col_norm);

  const std::size_t kmax = std::min(m, n);
  std::size_t rank = 0;
  std::vector<T> w(m);

  for (std::size_t k = 0; k < kmax; ++k) {
    // fresh subcolumn norms; pick the largest, lowest index on ties
    std::size_t best = k;
    T best_norm = -1;
    for (std::size_t j = k; j < n; ++j) {
      T s = 0;
      for (std::size_t i = k; i < m; ++i) s += a(i, j) * a(i, j);
      const T cn = std::sqrt(s);
      if (cn > best_norm) {
        best_norm = cn;
        best = j;
      }
    }
    if (best_norm <= rank_tol) break;
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, best));
      std::swap(perm[k], perm[best]);
    }

    const T beta = a(k, k) >= T(0) ? -best_norm : best_norm;
    T nw = 0;
    for (std::size_t i = k; i < m; ++i) {
      w[i] = a(i, k);
      if (i == k) w[i] -= beta;
      nw += w[i] * w[i];
    }
    if (nw > T(0)) {
      for (std::size_t j = k + 1; j < n; ++j) {
        T val = 0;
        for (std::size_t i = k; i < m; ++i) val += w[i] * a(i, j);
        const T scale = T(2) * val / nw;
        for (std::size_t i = k; i < m; ++i) a(i, j) -= scale * w[i];
      }
      T val = 0;
      for (std::size_t i = k; i < m; ++i) val += w[i] * qtb[i];
      const T scale = T(2) * val / nw;
      for (std::size_t i = k; i < m; ++i) qtb[i] -= scale * w[i];
    }
    a(k, k) = beta;
    for (std::size_t i = k + 1; i < m; ++i) a(i, k) = T(0);
    rank = k + 1;
  }

  // reduce [R11 R12] (rank x n) to [S 0] with reflectors from the right;
  // each reflector couples coordinate i with the tail block [rank, n)
  std::vector<std::vector<T>> z;
  if (rank > 0 && rank < n) {
    const std::size_t tail = n - rank;
    for (std::size_t ii = rank; ii-- > 0;) {
      std::vector<T> zi(tail + 1);
      zi[0] = a(ii, ii);
      T tail_mass = 0;
      for (std::size_t s = 0; s < tail; ++s) {
        zi[s + 1] = a(ii, rank + s);
        tail_mass += zi[s + 1] * zi[s + 1];
      }
      if (tail_mass == T(0)) {
        z.emplace_back();  // identity placeholder, keeps application order aligned
        continue;
      }
      const T sigma = std::sqrt(zi[0] * zi[0] + tail_mass);
      const T beta = zi[0] >= T(0) ? -sigma : sigma;
      zi[0] -= beta;
      T nz = 0;
      for (const T& c : zi) nz += c * c;
      for (std::size_t t = 0; t < ii; ++t) {
        T val = a(t, ii) * zi[0];
        for (std::size_t s = 0; s < tail; ++s) val += a(t, rank + s) * zi[s + 1];
        const T scale = T(2) * val / nz;
        a(t, ii) -= scale * zi[0];
        for (std::size_t s = 0; s < tail; ++s) a(t, rank + s) -= scale * zi[s + 1];
      }
      a(ii, ii) = beta;
      for (std::size_t s = 0; s < tail; ++s) a(ii, rank + s) = T(0);
      z.push_back(std::move(zi));
    }
  }

  // back-substitute the triangular core, then expand through the reflectors
  std::vector<T> y(n, T(0));
  for (std::size_t ii = rank; ii-- > 0;) {
    T val = qtb[ii];
    for (std::size_t j = ii + 1; j < rank; ++j) val -= a(ii, j) * y[j];
    y[ii] = val / a(ii, ii);
  }
  if (!z.empty()) {
    const std::size_t tail = n - rank;
    for (std::size_t zi_pos = z.size(); zi_pos-- > 0;) {
      const std::vector<T>& zi = z[zi_pos];
      if (zi.empty()) continue;
      const std::size_t i = rank - 1 - zi_pos;  // reflector coordinate
      T nz = 0;
      for (const T& c : zi) nz += c * c;
      T val = y[i] * zi[0];
      for (std::size_t s = 0; s < tail; ++s) val += y[rank + s] * zi[s + 1];
      const T scale = T(2) * val / nz;
      y[i] -= scale * zi[0];
      for (std::size_t s = 0; s < tail; ++s) y[rank + s] -= scale * zi[s + 1];
    }
  }
  for (std::size_t j = 0; j < n; ++j) out.solution[perm[j]] = y[j];

  std::vector<T> r = matvec(x, out.solution);
  T rn = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const T d = b[i] - r[i];
    rn += d * d;
  }
  out.residual_norm = std::sqrt(rn);
  out.numerical_rank = rank;
  out.rank_tol = rank_tol;
  return out;
}

}  // namespace steroid
