#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "steroid/errors.hpp"
#include "steroid/indexing.hpp"
#include "steroid/symtensor.hpp"

namespace steroid {

/// Deterministic random source. std::mt19937_64 has a standardized output
/// sequence, but the standard distributions do not, so the mappings from raw
/// 64-bit draws to doubles and integer ranges are implemented here and never
/// change: same seed, same values, on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in (0, 1], using the top 53 bits.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  /// Standard normal via Box-Muller; the paired value is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [lo, hi] by rejection sampling (no modulo bias).
  long long uniform_int(long long lo, long long hi) {
    if (lo > hi)
      throw RangeError("uniform_int: empty range [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1u;
    if (span == 0) return lo + static_cast<long long>(next_u64());  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<long long>(x % span);
  }

 private:
  std::mt19937_64 gen_;
  double cached_ = 0;
  bool has_cached_ = false;
};

/// Random symmetric tensor: one value per permutation orbit, drawn in orbit
/// order. Standard normal entries by default; with int_range = (lo, hi),
/// uniform integers in [lo, hi] stored as floating point.
template <std::floating_point T = double>
SymTensor<T> random_symmetric(
    int order, int dim, std::uint64_t seed,
    std::optional<std::pair<long long, long long>> int_range = {}) {
  const OrbitTable table(order, dim);
  Rng rng(seed);
  std::vector<T> orbit_value(table.count());
  for (std::size_t o = 0; o < table.count(); ++o) {
    if (int_range)
      orbit_value[o] = static_cast<T>(rng.uniform_int(int_range->first, int_range->second));
    else
      orbit_value[o] = static_cast<T>(rng.normal());
  }
  const std::size_t size = checked_pow(dim, order);
  std::vector<T> data(size);
  for (std::size_t l = 0; l < size; ++l)
    data[l] = orbit_value[static_cast<std::size_t>(table.orbit_of(l))];
  return SymTensor<T>::from_dense_unchecked(order, dim, std::move(data));
}

/// Random unit vector with normal components (for tests and demos).
template <std::floating_point T = double>
std::vector<T> random_unit_vector(int dim, Rng& rng) {
  std::vector<T> v(static_cast<std::size_t>(dim));
  T norm = 0;
  do {
    norm = 0;
    for (auto& x : v) {
      x = static_cast<T>(rng.normal());
      norm += x * x;
    }
  } while (norm == 0);
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

}  // namespace steroid
