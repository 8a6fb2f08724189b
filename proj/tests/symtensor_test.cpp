#include "steroid/symtensor.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "steroid/indexing.hpp"
#include "steroid/random.hpp"

using steroid::OrbitTable;
using steroid::SymTensor;

namespace {

SymTensor<double> example_tensor() {
  // order-3 tensor over R^2 with orbit values 24, 18, 12, 6
  return SymTensor<double>::from_orbits(3, 2, {
      {{1, 1, 1}, 24.0},
      {{2, 1, 1}, 18.0},
      {{2, 2, 1}, 12.0},
      {{2, 2, 2}, 6.0},
  });
}

}  // namespace

TEST(Indexing, LinearAndMultiIndexRoundTrip) {
  const int d = 4, n = 3;
  for (std::size_t l = 0; l < steroid::checked_pow(n, d); ++l) {
    const std::vector<int> idx = steroid::multi_index(l, d, n);
    EXPECT_EQ(steroid::linear_index(idx, n), l);
  }
  // first index fastest: incrementing i_1 moves one linear step
  EXPECT_EQ(steroid::linear_index({2, 1, 1, 1}, 3), 1u);
  EXPECT_EQ(steroid::linear_index({1, 2, 1, 1}, 3), 3u);
}

TEST(Indexing, CheckedPowOverflow) {
  EXPECT_EQ(steroid::checked_pow(2, 10), 1024u);
  EXPECT_THROW(steroid::checked_pow(10, 25), steroid::RangeError);
  EXPECT_THROW(steroid::linear_index({0, 1}, 2), steroid::RangeError);
  EXPECT_THROW(steroid::linear_index({3, 1}, 2), steroid::RangeError);
}

TEST(Indexing, OrbitTableStructure) {
  const OrbitTable table(3, 2);
  EXPECT_EQ(table.count(), 4u);  // (1,1,1) (2,1,1) (2,2,1) (2,2,2)
  std::size_t total = 0;
  for (std::size_t o = 0; o < table.count(); ++o) {
    const std::vector<int>& rep = table.rep(o);
    for (std::size_t k = 1; k < rep.size(); ++k) EXPECT_GE(rep[k - 1], rep[k]);
    total += table.weight(o);
  }
  EXPECT_EQ(total, 8u);
  EXPECT_EQ(table.weight(static_cast<std::size_t>(
                table.orbit_of(steroid::linear_index({2, 1, 1}, 2)))),
            3u);
}

TEST(SymTensorTest, FromOrbitsFillsAllPermutations) {
  const SymTensor<double> t = example_tensor();
  EXPECT_DOUBLE_EQ(t.at({1, 1, 1}), 24.0);
  EXPECT_DOUBLE_EQ(t.at({2, 1, 1}), 18.0);
  EXPECT_DOUBLE_EQ(t.at({1, 2, 1}), 18.0);
  EXPECT_DOUBLE_EQ(t.at({1, 1, 2}), 18.0);
  EXPECT_DOUBLE_EQ(t.at({2, 2, 1}), 12.0);
  EXPECT_DOUBLE_EQ(t.at({1, 2, 2}), 12.0);
  EXPECT_DOUBLE_EQ(t.at({2, 2, 2}), 6.0);
  EXPECT_TRUE(steroid::is_symmetric(t.data(), 3, 2, 0.0));  // exact
}

TEST(SymTensorTest, FromOrbitsConflictIsError) {
  EXPECT_THROW(SymTensor<double>::from_orbits(
                   2, 2, {{{1, 2}, 1.0}, {{2, 1}, 2.0}}),
               steroid::SymmetryError);
  // identical duplicate is allowed
  EXPECT_NO_THROW(SymTensor<double>::from_orbits(
      2, 2, {{{1, 2}, 1.0}, {{2, 1}, 1.0}}));
  // omitted orbits are zero
  const SymTensor<double> t =
      SymTensor<double>::from_orbits(2, 2, {{{1, 1}, 3.0}});
  EXPECT_DOUBLE_EQ(t.at({2, 2}), 0.0);
  EXPECT_DOUBLE_EQ(t.at({1, 2}), 0.0);
}

TEST(SymTensorTest, FromDenseValidatesSymmetry) {
  std::vector<double> data = example_tensor().data();
  EXPECT_NO_THROW(SymTensor<double>::from_dense(3, 2, data));
  data[1] += 1e-3;  // perturb (2,1,1) away from its orbit
  EXPECT_THROW(SymTensor<double>::from_dense(3, 2, data), steroid::SymmetryError);
  EXPECT_NO_THROW(SymTensor<double>::from_dense_unchecked(3, 2, data));
  // tolerance is relative to max(1, max|entry|): spread 1e-3 against
  // size 24 passes at 1e-4 relative
  EXPECT_NO_THROW(SymTensor<double>::from_dense(3, 2, data, 1e-4));
}

TEST(SymTensorTest, SymmetryCheckReportsWorstPair) {
  std::vector<double> data(8, 1.0);
  data[steroid::linear_index({2, 1, 1}, 2)] = 5.0;
  const steroid::SymmetryCheck<double> c = steroid::symmetry_check(data, 3, 2);
  EXPECT_DOUBLE_EQ(c.violation, 4.0);
  EXPECT_EQ(c.index_a, (std::vector<int>{2, 1, 1}));
  // the partner index names the same orbit
  std::vector<int> b = c.index_b;
  std::sort(b.begin(), b.end(), std::greater<int>());
  EXPECT_EQ(b, (std::vector<int>{2, 1, 1}));
}

TEST(SymTensorTest, VectorizeUnvectorizeRoundTrip) {
  const SymTensor<double> t = example_tensor();
  const std::vector<double> v = steroid::vectorize(t);
  EXPECT_EQ(v.size(), 8u);
  const SymTensor<double> back = steroid::unvectorize(v, 3, 2);
  EXPECT_EQ(back.data(), t.data());
  EXPECT_THROW(steroid::unvectorize(v, 2, 2), steroid::ShapeError);
}

TEST(SymTensorTest, ReshapeSquare) {
  const std::vector<double> v = {1, 2, 3, 4};
  const steroid::Matrix<double> m = steroid::reshape_square(v);
  ASSERT_EQ(m.rows(), 2u);
  // first index fastest: column j holds entries with second index j
  EXPECT_DOUBLE_EQ(m(0, 0), 1);
  EXPECT_DOUBLE_EQ(m(1, 0), 2);
  EXPECT_DOUBLE_EQ(m(0, 1), 3);
  EXPECT_DOUBLE_EQ(m(1, 1), 4);
  EXPECT_THROW(steroid::reshape_square(std::vector<double>{1, 2, 3}),
               steroid::ShapeError);
}

TEST(SymTensorTest, ReshapeTensorToMatrixGolden) {
  // the square unfolding of the embedded example tensor
  const SymTensor<double> b = steroid::embed(example_tensor());
  const steroid::Matrix<double> m = steroid::reshape_tensor_to_matrix(b);
  ASSERT_EQ(m.rows(), 4u);
  const double want[4][4] = {{24, 18, 18, 12},
                             {18, 12, 12, 6},
                             {18, 12, 12, 6},
                             {12, 6, 6, 0}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(m(i, j), want[i][j]);
}

TEST(SymTensorTest, ReshapeOddOrderIsError) {
  try {
    steroid::reshape_tensor_to_matrix(example_tensor());
    FAIL() << "expected ShapeError";
  } catch (const steroid::ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("embed"), std::string::npos);
  }
}

TEST(SymTensorTest, EmbedPlacesOriginalBlockAndZeros) {
  const SymTensor<double> t = example_tensor();
  const SymTensor<double> b = steroid::embed(t);
  EXPECT_EQ(b.order(), 4);
  EXPECT_EQ(b.dim(), 2);
  // original block: trailing index pinned to 1
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        EXPECT_DOUBLE_EQ(b.at({i, j, k, 1}), t.at({i, j, k}));
  // permutation images carry the same values
  EXPECT_DOUBLE_EQ(b.at({1, 2, 2, 2}), t.at({2, 2, 2}));
  // an orbit with no preimage is zero: (2,2,2,2) has no index-1 slot
  EXPECT_DOUBLE_EQ(b.at({2, 2, 2, 2}), 0.0);
  EXPECT_TRUE(steroid::is_symmetric(b.data(), 4, 2, 0.0));
}

TEST(SymTensorTest, EmbedExhaustiveExtraction) {
  for (int d : {3, 5}) {
    const SymTensor<double> t = steroid::random_symmetric(d, 2, 99u + d);
    const SymTensor<double> b = steroid::embed(t);
    const int e = steroid::embedded_order(d);
    EXPECT_EQ(b.order(), e);
    for (std::size_t l = 0; l < t.size(); ++l) {
      std::vector<int> idx = steroid::multi_index(l, d, 2);
      idx.resize(static_cast<std::size_t>(e), 1);
      EXPECT_DOUBLE_EQ(b.at(idx), t.data()[l]);
    }
  }
}

TEST(SymTensorTest, EmbedPowerOfTwoOrderIsIdentity) {
  const SymTensor<double> t = steroid::random_symmetric(4, 3, 17u);
  const SymTensor<double> b = steroid::embed(t);
  EXPECT_EQ(b.order(), 4);
  EXPECT_EQ(b.data(), t.data());
  const SymTensor<double> v = steroid::random_symmetric(1, 5, 3u);
  EXPECT_EQ(steroid::embed(v).order(), 1);  // e = 1 for order 1
}

TEST(SymTensorTest, EmbeddedOrderValues) {
  EXPECT_EQ(steroid::embedded_order(1), 1);
  EXPECT_EQ(steroid::embedded_order(2), 2);
  EXPECT_EQ(steroid::embedded_order(3), 4);
  EXPECT_EQ(steroid::embedded_order(5), 8);
  EXPECT_EQ(steroid::embedded_order(8), 8);
  EXPECT_EQ(steroid::embedded_order(9), 16);
}

TEST(SymTensorTest, RankOneIsExactlySymmetric) {
  const std::vector<double> v = {0.6, -0.8, 0.3};
  const SymTensor<double> t = SymTensor<double>::rank_one(2.5, v, 3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        EXPECT_NEAR(t.at({i, j, k}), 2.5 * v[i - 1] * v[j - 1] * v[k - 1], 1e-15);
  EXPECT_TRUE(steroid::is_symmetric(t.data(), 3, 3, 0.0));  // orbit-exact
}

TEST(SymTensorTest, InnerProductAndNorm) {
  const SymTensor<double> t = example_tensor();
  const double ip = steroid::inner_product(t, t);
  EXPECT_DOUBLE_EQ(steroid::frobenius_norm(t), std::sqrt(ip));
  double direct = 0;
  for (double x : t.data()) direct += x * x;
  EXPECT_DOUBLE_EQ(ip, direct);
  const SymTensor<double> other = steroid::random_symmetric(2, 2, 1u);
  EXPECT_THROW(steroid::inner_product(t, other), steroid::ShapeError);
}

TEST(SymTensorTest, RandomSymmetricIsDeterministicAndSymmetric) {
  const SymTensor<double> a = steroid::random_symmetric(3, 3, 42u);
  const SymTensor<double> b = steroid::random_symmetric(3, 3, 42u);
  EXPECT_EQ(a.data(), b.data());
  EXPECT_TRUE(steroid::is_symmetric(a.data(), 3, 3, 0.0));
  const SymTensor<double> c = steroid::random_symmetric(3, 3, 43u);
  EXPECT_NE(a.data(), c.data());
  // integer mode stays within the requested range
  const SymTensor<double> d =
      steroid::random_symmetric(4, 7, 7u, std::make_pair(24ll, 100ll));
  for (double x : d.data()) {
    EXPECT_GE(x, 24.0);
    EXPECT_LE(x, 100.0);
    EXPECT_DOUBLE_EQ(x, std::round(x));
  }
}
