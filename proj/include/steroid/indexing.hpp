#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "steroid/errors.hpp"

namespace steroid {

/// Linearization convention used throughout: first index fastest.
/// A multi-index (i_1, ..., i_d) with 1-based entries in [1, n] maps to
///   L = sum_k (i_k - 1) * n^(k-1),
/// i.e. column-major order. Under this convention reshapes are pure data
/// reinterpretation and vec(a o ... o a) equals the standard Kronecker
/// power a (x) ... (x) a.

/// n^d with overflow check. Throws RangeError if the result does not fit.
inline std::size_t checked_pow(int dim, int order) {
  if (dim <= 0) throw RangeError("dimension must be positive, got " + std::to_string(dim));
  if (order < 0) throw RangeError("order must be non-negative, got " + std::to_string(order));
  std::size_t result = 1;
  const std::size_t n = static_cast<std::size_t>(dim);
  for (int k = 0; k < order; ++k) {
    if (result > std::numeric_limits<std::size_t>::max() / n)
      throw RangeError("tensor size " + std::to_string(dim) + "^" +
                       std::to_string(order) + " overflows");
    result *= n;
  }
  return result;
}

/// Multi-index (1-based entries) -> linear index, first index fastest.
inline std::size_t linear_index(const std::vector<int>& idx, int dim) {
  std::size_t l = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 1 || idx[k] > dim)
      throw RangeError("index entry " + std::to_string(idx[k]) + " outside [1, " +
                       std::to_string(dim) + "]");
    l += static_cast<std::size_t>(idx[k] - 1) * stride;
    stride *= static_cast<std::size_t>(dim);
  }
  return l;
}

/// Linear index -> multi-index with `order` 1-based entries.
inline std::vector<int> multi_index(std::size_t linear, int order, int dim) {
  std::vector<int> idx(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(linear % static_cast<std::size_t>(dim)) + 1;
    linear /= static_cast<std::size_t>(dim);
  }
  return idx;
}

/// Permutation-orbit structure of the index set {1..n}^d. Entries of a
/// symmetric tensor are constant on orbits; an orbit is identified by its
/// representative, the index tuple sorted non-increasingly.
///
/// Orbits are numbered in order of first appearance along the linearization,
/// which is deterministic and independent of platform.
class OrbitTable {
 public:
  OrbitTable(int order, int dim) : order_(order), dim_(dim) {
    const std::size_t size = checked_pow(dim, order);
    orbit_of_.resize(size);
    std::vector<std::int32_t> id_of_canonical(size, -1);
    std::vector<int> idx(static_cast<std::size_t>(order), 1);
    std::vector<int> rep(static_cast<std::size_t>(order));
    for (std::size_t l = 0; l < size; ++l) {
      rep = idx;
      std::sort(rep.begin(), rep.end(), std::greater<int>());
      std::size_t canon = 0;
      std::size_t stride = 1;
      for (int k = 0; k < order; ++k) {
        canon += static_cast<std::size_t>(rep[static_cast<std::size_t>(k)] - 1) * stride;
        stride *= static_cast<std::size_t>(dim);
      }
      if (id_of_canonical[canon] < 0) {
        id_of_canonical[canon] = static_cast<std::int32_t>(reps_.size());
        reps_.push_back(rep);
        weights_.push_back(0);
      }
      const std::int32_t o = id_of_canonical[canon];
      orbit_of_[l] = o;
      ++weights_[static_cast<std::size_t>(o)];
      // odometer increment, first index fastest
      for (int k = 0; k < order; ++k) {
        if (++idx[static_cast<std::size_t>(k)] <= dim) break;
        idx[static_cast<std::size_t>(k)] = 1;
      }
    }
  }

  int order() const noexcept { return order_; }
  int dim() const noexcept { return dim_; }

  /// Number of orbits; equals C(dim + order - 1, order).
  std::size_t count() const noexcept { return reps_.size(); }

  /// Orbit id of a linear index.
  std::int32_t orbit_of(std::size_t linear) const { return orbit_of_[linear]; }

  const std::vector<std::int32_t>& orbit_map() const noexcept { return orbit_of_; }

  /// Representative of orbit `o`: the member with non-increasing entries.
  const std::vector<int>& rep(std::size_t o) const { return reps_[o]; }

  /// Orbit size (number of distinct permutations of the representative).
  std::size_t weight(std::size_t o) const { return weights_[o]; }

 private:
  int order_;
  int dim_;
  std::vector<std::int32_t> orbit_of_;
  std::vector<std::vector<int>> reps_;
  std::vector<std::size_t> weights_;
};

}  // namespace steroid
