#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "steroid/errors.hpp"
#include "steroid/indexing.hpp"
#include "steroid/matrix.hpp"

namespace steroid {

template <std::floating_point T>
inline constexpr T default_sym_tol = T(1e-12);

/// Result of a symmetry scan: the largest spread within any permutation orbit
/// and the two indices realizing it.
template <std::floating_point T>
struct SymmetryCheck {
  T violation = 0;            ///< max over orbits of (max entry - min entry)
  T max_abs = 0;              ///< largest |entry| of the tensor
  std::vector<int> index_a;   ///< where the orbit maximum was found
  std::vector<int> index_b;   ///< where the orbit minimum was found
};

/// Exhaustive orbit scan of a dense order-d cube held in first-index-fastest
/// layout. O(n^d * d log d).
template <std::floating_point T>
SymmetryCheck<T> symmetry_check(const std::vector<T>& data, int order, int dim) {
  const std::size_t size = checked_pow(dim, order);
  if (data.size() != size)
    throw ShapeError("dense data has " + std::to_string(data.size()) +
                     " entries, expected " + std::to_string(size));
  const OrbitTable table(order, dim);
  const std::size_t norb = table.count();
  std::vector<T> lo(norb), hi(norb);
  std::vector<std::size_t> lo_at(norb), hi_at(norb);
  std::vector<char> seen(norb, 0);
  SymmetryCheck<T> out;
  for (std::size_t l = 0; l < size; ++l) {
    const T v = data[l];
    const T a = std::abs(v);
    if (a > out.max_abs) out.max_abs = a;
    const std::size_t o = static_cast<std::size_t>(table.orbit_of(l));
    if (!seen[o]) {
      seen[o] = 1;
      lo[o] = hi[o] = v;
      lo_at[o] = hi_at[o] = l;
    } else {
      if (v < lo[o]) { lo[o] = v; lo_at[o] = l; }
      if (v > hi[o]) { hi[o] = v; hi_at[o] = l; }
    }
  }
  std::size_t worst = 0;
  bool found = false;
  for (std::size_t o = 0; o < norb; ++o) {
    const T spread = hi[o] - lo[o];
    if (spread > out.violation) {
      out.violation = spread;
      worst = o;
      found = true;
    }
  }
  if (found) {
    out.index_a = multi_index(hi_at[worst], order, dim);
    out.index_b = multi_index(lo_at[worst], order, dim);
  }
  return out;
}

/// True when every orbit of `data` is constant within tol * max(1, max|entry|).
template <std::floating_point T>
bool is_symmetric(const std::vector<T>& data, int order, int dim,
                  T tol = default_sym_tol<T>) {
  const SymmetryCheck<T> c = symmetry_check(data, order, dim);
  return c.violation <= tol * std::max(T(1), c.max_abs);
}

namespace detail {

inline std::string format_index(const std::vector<int>& idx) {
  std::string s = "(";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx[k]);
  }
  return s + ")";
}

}  // namespace detail

/// Dense symmetric tensor of a fixed order and dimension, stored as the full
/// n^d cube in first-index-fastest (column-major) layout. Construction either
/// guarantees exact orbit constancy (from_orbits, rank_one, zero) or validates
/// it to a tolerance (from_dense).
template <std::floating_point T = double>
class SymTensor {
 public:
  /// All-zero tensor.
  static SymTensor zero(int order, int dim) {
    return SymTensor(order, dim, std::vector<T>(checked_pow(dim, order), T(0)));
  }

  /// Construct from (multi-index, value) pairs; every permutation of a given
  /// index receives the same value. Two entries naming the same orbit with
  /// different values are a conflict.
  static SymTensor from_orbits(
      int order, int dim,
      const std::vector<std::pair<std::vector<int>, T>>& entries) {
    const std::size_t size = checked_pow(dim, order);
    const OrbitTable table(order, dim);
    std::vector<T> orbit_value(table.count(), T(0));
    std::vector<char> set(table.count(), 0);
    for (const auto& [idx, value] : entries) {
      if (static_cast<int>(idx.size()) != order)
        throw ShapeError("index " + detail::format_index(idx) + " has " +
                         std::to_string(idx.size()) + " entries, expected " +
                         std::to_string(order));
      const std::size_t o =
          static_cast<std::size_t>(table.orbit_of(linear_index(idx, dim)));
      if (set[o] && orbit_value[o] != value)
        throw SymmetryError("conflicting values for orbit of " +
                            detail::format_index(table.rep(o)) + ": " +
                            std::to_string(orbit_value[o]) + " vs " +
                            std::to_string(value));
      orbit_value[o] = value;
      set[o] = 1;
    }
    std::vector<T> data(size);
    for (std::size_t l = 0; l < size; ++l)
      data[l] = orbit_value[static_cast<std::size_t>(table.orbit_of(l))];
    return SymTensor(order, dim, std::move(data));
  }

  /// Construct from a dense cube, validating symmetry: the largest orbit
  /// spread must be at most sym_tol * max(1, max|entry|).
  static SymTensor from_dense(int order, int dim, std::vector<T> data,
                              T sym_tol = default_sym_tol<T>) {
    const SymmetryCheck<T> c = symmetry_check(data, order, dim);
    if (c.violation > sym_tol * std::max(T(1), c.max_abs))
      throw SymmetryError(
          "tensor is not symmetric: entries at " + detail::format_index(c.index_a) +
          " and " + detail::format_index(c.index_b) + " differ by " +
          std::to_string(c.violation));
    return SymTensor(order, dim, std::move(data));
  }

  /// Construct from a dense cube without the symmetry scan. For data whose
  /// symmetry is guaranteed structurally or checked by the caller.
  static SymTensor from_dense_unchecked(int order, int dim, std::vector<T> data) {
    const std::size_t size = checked_pow(dim, order);
    if (data.size() != size)
      throw ShapeError("dense data has " + std::to_string(data.size()) +
                       " entries, expected " + std::to_string(size));
    return SymTensor(order, dim, std::move(data));
  }

  /// lambda * v o v o ... o v (order factors), built orbit-wise so the result
  /// is exactly symmetric.
  static SymTensor rank_one(T lambda, const std::vector<T>& v, int order) {
    const int dim = static_cast<int>(v.size());
    if (dim == 0) throw ShapeError("rank_one: empty vector");
    const std::size_t size = checked_pow(dim, order);
    const OrbitTable table(order, dim);
    std::vector<T> orbit_value(table.count());
    for (std::size_t o = 0; o < table.count(); ++o) {
      T p = lambda;
      for (int ik : table.rep(o)) p *= v[static_cast<std::size_t>(ik - 1)];
      orbit_value[o] = p;
    }
    std::vector<T> data(size);
    for (std::size_t l = 0; l < size; ++l)
      data[l] = orbit_value[static_cast<std::size_t>(table.orbit_of(l))];
    return SymTensor(order, dim, std::move(data));
  }

  int order() const noexcept { return order_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  const std::vector<T>& data() const noexcept { return data_; }

  /// Entry at a 1-based multi-index.
  T at(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != order_)
      throw ShapeError("index has " + std::to_string(idx.size()) +
                       " entries, expected " + std::to_string(order_));
    return data_[linear_index(idx, dim_)];
  }

 private:
  SymTensor(int order, int dim, std::vector<T> data)
      : order_(order), dim_(dim), data_(std::move(data)) {}

  int order_;
  int dim_;
  std::vector<T> data_;
};

/// Copy of the dense payload in linearization order.
template <std::floating_point T>
std::vector<T> vectorize(const SymTensor<T>& t) {
  return t.data();
}

/// Inverse of vectorize. Performs no symmetry validation; use is_symmetric
/// when the source of `v` does not guarantee it.
template <std::floating_point T>
SymTensor<T> unvectorize(const std::vector<T>& v, int order, int dim) {
  return SymTensor<T>::from_dense_unchecked(order, dim, v);
}

/// Reshape a vector of length m^2 into an m x m matrix (first index fastest,
/// so this is a pure reinterpretation).
template <std::floating_point T>
Matrix<T> reshape_square(const std::vector<T>& v) {
  const std::size_t len = v.size();
  std::size_t m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(len))));
  while (m * m > len) --m;
  while ((m + 1) * (m + 1) <= len) ++m;
  if (m * m != len)
    throw ShapeError("vector of length " + std::to_string(len) +
                     " is not a perfect square");
  Matrix<T> a(m, m);
  a.data() = v;
  return a;
}

/// Reshape an even-order tensor into the square n^(d/2) x n^(d/2) unfolding.
template <std::floating_point T>
Matrix<T> reshape_tensor_to_matrix(const SymTensor<T>& t) {
  if (t.order() % 2 != 0)
    throw ShapeError("order " + std::to_string(t.order()) +
                     " is odd; embed() to the next power of two first");
  const std::size_t m = checked_pow(t.dim(), t.order() / 2);
  Matrix<T> a(m, m);
  a.data() = t.data();
  return a;
}

/// Smallest power of two that is >= order.
inline int embedded_order(int order) {
  if (order < 1) throw RangeError("order must be positive, got " + std::to_string(order));
  int e = 1;
  while (e < order) {
    if (e > (1 << 29)) throw RangeError("order too large to embed");
    e <<= 1;
  }
  return e;
}

/// Embed an order-d tensor into order e = 2^ceil(log2 d): the block with all
/// trailing indices equal to 1 carries the original entries, the symmetric
/// images of that block repeat them, and everything else is zero. Returns the
/// input unchanged when d is already a power of two.
template <std::floating_point T>
SymTensor<T> embed(const SymTensor<T>& t) {
  const int d = t.order();
  const int e = embedded_order(d);
  if (e == d) return t;
  const int n = t.dim();
  const OrbitTable src(d, n);
  const OrbitTable dst(e, n);
  std::vector<T> orbit_value(dst.count(), T(0));
  std::vector<int> padded(static_cast<std::size_t>(e), 1);
  for (std::size_t o = 0; o < src.count(); ++o) {
    const std::vector<int>& rep = src.rep(o);
    std::copy(rep.begin(), rep.end(), padded.begin());
    // rep is non-increasing and the padding is all 1s, so `padded` is already
    // the canonical representative of its order-e orbit
    const std::size_t eo =
        static_cast<std::size_t>(dst.orbit_of(linear_index(padded, n)));
    orbit_value[eo] = t.data()[linear_index(rep, n)];
  }
  const std::size_t size = checked_pow(n, e);
  std::vector<T> data(size);
  for (std::size_t l = 0; l < size; ++l)
    data[l] = orbit_value[static_cast<std::size_t>(dst.orbit_of(l))];
  return SymTensor<T>::from_dense_unchecked(e, n, std::move(data));
}

template <std::floating_point T>
T inner_product(const SymTensor<T>& a, const SymTensor<T>& b) {
  if (a.order() != b.order() || a.dim() != b.dim())
    throw ShapeError("inner_product: shape mismatch (order " +
                     std::to_string(a.order()) + " dim " + std::to_string(a.dim()) +
                     " vs order " + std::to_string(b.order()) + " dim " +
                     std::to_string(b.dim()) + ")");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

template <std::floating_point T>
T frobenius_norm(const SymTensor<T>& t) {
  return std::sqrt(inner_product(t, t));
}

}  // namespace steroid
