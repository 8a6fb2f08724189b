#pragma once

// Independent verification oracle. Deliberately self-contained: includes
// nothing from the rest of the library, duck-types its tensor and
// decomposition arguments, and recomputes everything with plain nested loops
// so that agreement with the main code path is meaningful evidence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace steroid::oracle {

struct OracleReport {
  double max_symmetry_violation = 0;  ///< largest orbit spread of the reconstruction
  double reconstruction_error = 0;    ///< Frobenius distance to the input tensor
  bool rank_bound_holds = true;
};

/// order-fold Kronecker power of v, first index fastest, computed one entry
/// at a time from an explicit odometer of nested indices.
template <typename T>
std::vector<T> naive_kron_power(const std::vector<T>& v, int order) {
  if (order < 1) throw std::runtime_error("naive_kron_power: order must be positive");
  const std::size_t n = v.size();
  std::size_t size = 1;
  for (int k = 0; k < order; ++k) size *= n;
  std::vector<std::size_t> digit(static_cast<std::size_t>(order), 0);
  std::vector<T> out(size);
  for (std::size_t l = 0; l < size; ++l) {
    T prod = 1;
    for (int k = 0; k < order; ++k) prod *= v[digit[static_cast<std::size_t>(k)]];
    out[l] = prod;
    for (int k = 0; k < order; ++k) {
      if (++digit[static_cast<std::size_t>(k)] < n) break;
      digit[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

/// Recompute sum_j lambda_j v_j^(x)order entry by entry and compare against
/// the tensor. Tensor must expose order(), dim(), data() (dense, first index
/// fastest); the decomposition must expose order, dim, terms with lambda / v.
template <typename Tensor, typename Dec>
OracleReport verify_decomposition(const Tensor& t, const Dec& dec) {
  if (t.order() != dec.order || t.dim() != dec.dim)
    throw std::runtime_error("verify_decomposition: shape mismatch");
  const int d = t.order();
  const std::size_t n = static_cast<std::size_t>(t.dim());
  std::size_t size = 1;
  for (int k = 0; k < d; ++k) size *= n;
  if (t.data().size() != size)
    throw std::runtime_error("verify_decomposition: tensor payload size mismatch");
  for (const auto& term : dec.terms)
    if (term.v.size() != n)
      throw std::runtime_error("verify_decomposition: term vector length mismatch");

  std::vector<std::size_t> digit(static_cast<std::size_t>(d), 0);
  double err2 = 0;
  std::map<std::vector<std::size_t>, std::pair<double, double>> orbit_range;
  std::vector<std::size_t> sorted(static_cast<std::size_t>(d));
  for (std::size_t l = 0; l < size; ++l) {
    double s = 0;
    for (const auto& term : dec.terms) {
      double prod = static_cast<double>(term.lambda);
      for (int k = 0; k < d; ++k)
        prod *= static_cast<double>(term.v[digit[static_cast<std::size_t>(k)]]);
      s += prod;
    }
    const double diff = static_cast<double>(t.data()[l]) - s;
    err2 += diff * diff;

    sorted = digit;
    std::sort(sorted.begin(), sorted.end());
    auto it = orbit_range.find(sorted);
    if (it == orbit_range.end()) {
      orbit_range.emplace(sorted, std::make_pair(s, s));
    } else {
      if (s < it->second.first) it->second.first = s;
      if (s > it->second.second) it->second.second = s;
    }

    for (int k = 0; k < d; ++k) {
      if (++digit[static_cast<std::size_t>(k)] < n) break;
      digit[static_cast<std::size_t>(k)] = 0;
    }
  }

  OracleReport report;
  report.reconstruction_error = std::sqrt(err2);
  for (const auto& [key, range] : orbit_range)
    report.max_symmetry_violation =
        std::max(report.max_symmetry_violation, range.second - range.first);
  return report;
}

namespace detail {

inline long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long acc = 1;
  for (long long i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

class OracleRng {
 public:
  explicit OracleRng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
  }

  double normal() {
    // fresh Box-Muller pair each call; the sine partner is discarded
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

/// Eigenvalues of a small symmetric matrix by plain cyclic Jacobi, values
/// only, no ordering guarantees.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> g, std::size_t m) {
  double norm2 = 0;
  for (double x : g) norm2 += x * x;
  const double threshold =
      static_cast<double>(m) * std::numeric_limits<double>::epsilon() * std::sqrt(norm2);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q)
        if (p != q) off += g[p + q * m] * g[p + q * m];
    if (std::sqrt(off) <= threshold) break;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = g[p + q * m];
        if (apq == 0) continue;
        const double theta = (g[q + q * m] - g[p + p * m]) / (2 * apq);
        const double sign = theta < 0 ? -1.0 : 1.0;
        const double tt = sign / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(tt * tt + 1);
        const double s = tt * c;
        const double gpp = g[p + p * m];
        const double gqq = g[q + q * m];
        g[p + p * m] = gpp - tt * apq;
        g[q + q * m] = gqq + tt * apq;
        g[p + q * m] = g[q + p * m] = 0;
        for (std::size_t k = 0; k < m; ++k) {
          if (k == p || k == q) continue;
          const double gkp = g[k + p * m];
          const double gkq = g[k + q * m];
          g[k + p * m] = g[p + k * m] = c * gkp - s * gkq;
          g[k + q * m] = g[q + k * m] = s * gkp + c * gkq;
        }
      }
    }
  }
  std::vector<double> eig(m);
  for (std::size_t i = 0; i < m; ++i) eig[i] = g[i + i * m];
  return eig;
}

}  // namespace detail

/// Empirical check of the monomial rank ceiling: batches of random unit
/// Kronecker power columns (more columns than the ceiling) must produce a
/// Gram matrix whose numerical rank never exceeds
/// C(order + dim - 1, dim - 1). Rank is measured from the Gram eigenvalues
/// with threshold 10 * m * eps * lambda_max.
inline bool monomial_rank_oracle(int dim, int order, int trials,
                                 std::uint64_t seed = 0x5eed) {
  const long long bound =
      detail::binomial(static_cast<long long>(order) + dim - 1, dim - 1);
  const std::size_t cols = static_cast<std::size_t>(bound) + 5;
  detail::OracleRng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<std::vector<double>> power(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> v(static_cast<std::size_t>(dim));
      double nv = 0;
      for (auto& x : v) {
        x = rng.normal();
        nv += x * x;
      }
      nv = std::sqrt(nv);
      for (auto& x : v) x /= nv;
      power[j] = naive_kron_power(v, order);
    }
    std::vector<double> gram(cols * cols);
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        double s = 0;
        for (std::size_t l = 0; l < power[i].size(); ++l) s += power[i][l] * power[j][l];
        gram[i + j * cols] = s;
      }
    const std::vector<double> eig = detail::jacobi_eigenvalues(std::move(gram), cols);
    double lmax = 0;
    for (double x : eig) lmax = std::max(lmax, std::abs(x));
    const double tol =
        10.0 * static_cast<double>(cols) * std::numeric_limits<double>::epsilon() * lmax;
    long long rank = 0;
    for (double x : eig)
      if (x > tol) ++rank;
    if (rank > bound) return false;
  }
  return true;
}

}  // namespace steroid::oracle
