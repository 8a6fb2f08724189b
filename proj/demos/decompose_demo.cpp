// Decompose a small symmetric 3-way tensor and print its rank-1 terms.
//
// The tensor is given by one value per permutation orbit; the library fills
// every index permutation. Order 3 is odd, so decompose() internally embeds
// the tensor at order 4, harvests pure powers by recursive symmetric
// eigendecompositions, and fits coefficients at the original order.

#include <cmath>
#include <cstdio>

#include "steroid/steroid.hpp"

int main() {
  using steroid::SymTensor;

  const SymTensor<double> t = SymTensor<double>::from_orbits(3, 2, {
      {{1, 1, 1}, 24.0},
      {{2, 1, 1}, 18.0},
      {{2, 2, 1}, 12.0},
      {{2, 2, 2}, 6.0},
  });

  const steroid::Decomposition<double> dec = steroid::decompose(t);

  std::printf("order %d, dimension %d, %zu terms, residual %.3e, %s\n",
              dec.order, dec.dim, dec.terms.size(), dec.residual_norm,
              dec.converged ? "converged" : "unconverged");
  for (const auto& term : dec.terms) {
    std::printf("  %+10.4f * (", term.lambda);
    for (std::size_t i = 0; i < term.v.size(); ++i)
      std::printf("%s%+.4f", i ? ", " : "", term.v[i]);
    std::printf(")^o3\n");
  }

  const steroid::SymTensor<double> back = steroid::reconstruct(dec);
  double err = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = t.data()[i] - back.data()[i];
    err += d * d;
  }
  std::printf("reconstruction check: %.3e\n", std::sqrt(err));
  return 0;
}
