#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"
#include "genquot/random.hpp"

using namespace genquot;

TEST(GaussianMatrix, Deterministic) {
  EXPECT_EQ(gaussian_matrix(5, 7, 0.3, {9, 2}), gaussian_matrix(5, 7, 0.3, {9, 2}));
  EXPECT_NE(gaussian_matrix(5, 7, 0.3, {9, 2}), gaussian_matrix(5, 7, 0.3, {9, 3}));
}

TEST(GaussianMatrix, Shape) {
  const Matrix m = gaussian_matrix(2, 3, 1.0, {1, 1});
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
}

TEST(GaussianMatrix, ColumnsArePrefixStable) {
  const Matrix a = gaussian_matrix(4, 3, 1.0, {6, 0});
  const Matrix b = gaussian_matrix(4, 8, 1.0, {6, 0});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(a(i, j), b(i, j));
}

TEST(GaussianMatrix, MeanSquaredNormIsOne) {
  constexpr std::size_t kStreams = 100000;
  double sum = 0.0;
  for (std::size_t s = 0; s < kStreams; ++s) {
    const Matrix g = gaussian_matrix(100, 1, 1.0 / 100, {42, s});
    const double n = norm2(g.data());
    sum += n * n;
  }
  EXPECT_NEAR(sum / kStreams, 1.0, 0.002);
}

TEST(GaussianVector, TailSmallBallAndConcentration) {
  constexpr std::size_t kSamples = 100000;
  for (std::size_t d : {20u, 50u}) {
    Rng rng({77, d});
    std::size_t big = 0, small = 0;
    for (std::size_t i = 0; i < kSamples; ++i) {
      const double n = norm2(gaussian_vector(d, 1.0 / static_cast<double>(d), rng));
      big += n >= 2.0;
      small += n <= 0.5;
    }
    EXPECT_EQ(big, 0u) << "d=" << d;
    if (d == 20) {
      EXPECT_LE(static_cast<double>(small) / kSamples, std::pow(0.5 * std::exp(0.5), 20));
    }
  }
}

TEST(Streams, LagCorrelationIsSmall) {
  constexpr std::size_t kSamples = 20000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < kSamples; ++i) {
    Rng a({5, i});
    Rng b({5, i + 1});
    const double x = a.normal(), y = b.normal();
    sx += x, sy += y, sxy += x * y, sxx += x * x, syy += y * y;
  }
  const double n = kSamples;
  const double corr = (sxy / n - sx * sy / (n * n)) /
                      std::sqrt((sxx / n - sx * sx / (n * n)) * (syy / n - sy * sy / (n * n)));
  EXPECT_LT(std::abs(corr), 3.0 / std::sqrt(n));
}

TEST(HaarSubspace, FullDimensionSpansSpace) {
  const HaarSubspace h = haar_subspace(5, 5, {1, 0});
  EXPECT_LE(orthonormality_defect(h.basis), 1e-12);
  const Matrix p = projection_matrix(h.basis);
  const Matrix id = Matrix::identity(5);
  for (std::size_t i = 0; i < 25; ++i) EXPECT_NEAR(p.data()[i], id.data()[i], 1e-12);
}

TEST(HaarSubspace, Deterministic) {
  EXPECT_EQ(haar_subspace(9, 4, {3, 3}).basis, haar_subspace(9, 4, {3, 3}).basis);
}

TEST(HaarSubspace, ProjectionOfBasisVectorHasExpectedMass) {
  constexpr std::size_t kSeeds = 10000;
  double sum = 0.0;
  for (std::size_t s = 0; s < kSeeds; ++s) {
    const Matrix b = haar_subspace(20, 5, {8, s}).basis;
    for (std::size_t j = 0; j < 5; ++j) sum += b(0, j) * b(0, j);
  }
  EXPECT_NEAR(sum / kSeeds, 5.0 / 20.0, 0.01);
}

TEST(HaarOrthogonal, IsOrthogonal) {
  EXPECT_LE(orthonormality_defect(haar_orthogonal(7, {2, 2})), 1e-12);
}

TEST(RandomSubset, SortedDistinctInRange) {
  Rng rng({4, 4});
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = random_subset(30, 7, rng);
    ASSERT_EQ(s.size(), 7u);
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 7u);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1], s[i]);
    EXPECT_LT(s.back(), 30u);
  }
}

TEST(ParseSeed, DecimalAndHex) {
  EXPECT_EQ(parse_seed("42"), 42u);
  EXPECT_EQ(parse_seed("0x2a"), 42u);
  EXPECT_THROW(parse_seed("abc"), UsageError);
  EXPECT_THROW(parse_seed(""), UsageError);
}

TEST(Rng, UniformInOpenInterval) {
  Rng rng({0, 0});
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
