#include <gtest/gtest.h>

#include <cmath>

#include "genquot/body.hpp"
#include "genquot/constructions.hpp"
#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"
#include "oracles.hpp"

using namespace genquot;

TEST(L1Subspace, CoordinateSubspaceOfCrossPolytope) {
  const RandomQuotientBody b(Matrix::identity(9));
  L1Options o;
  o.k = 3;
  const L1Witness w = find_l1_subspace(b, {1, 0}, o);
  ASSERT_EQ(w.indices.size(), 3u);
  EXPECT_NEAR(w.iso_constant, 1.0, 1e-9);
  EXPECT_NEAR(w.compl_constant, 1.0, 1e-9);
  EXPECT_NEAR(w.sigma_min, 1.0, 1e-12);
  EXPECT_NEAR(w.max_leak, 0.0, 1e-12);
  EXPECT_EQ(w.u_inverse_kind, BoundKind::exact);
}

TEST(L1Subspace, TooLargeDimensionFailsEl2) {
  const RandomQuotientBody b = make_body(4, 12, {2, 0});
  L1Options o;
  o.k = 5;
  o.retries = 3;
  try {
    find_l1_subspace(b, {2, 1}, o);
    FAIL() << "expected ConditionFailed";
  } catch (const ConditionFailed& e) {
    EXPECT_EQ(e.tag(), "el2");
    EXPECT_EQ(e.measured(), 0.0);
  }
}

TEST(L1Subspace, ReverifiesAndConstantsAtLeastOne) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const RandomQuotientBody b = make_body(16, 256, {3, s});
    const L1Witness w = find_l1_subspace(b, {4, s});
    EXPECT_LE(reverify(b, w), 1e-9);
    EXPECT_GE(w.compl_constant, 1.0 - 1e-8);
    EXPECT_GE(w.iso_constant, 1.0 - 1e-8);
    EXPECT_GE(w.sigma_min, 0.25);
    EXPECT_LE(w.max_leak, 1.0 / std::sqrt(static_cast<double>(w.indices.size())) + 1e-12);
  }
}

TEST(L1Subspace, IsoConstantIsStableAcrossDisjointSubsets) {
  constexpr std::size_t kSeeds = 20;
  std::size_t stable = 0, compared = 0;
  L1Options o;
  o.k = 2;
  const auto disjoint = [](const L1Witness& a, const L1Witness& b) {
    for (std::size_t i : a.indices)
      for (std::size_t j : b.indices)
        if (i == j) return false;
    return true;
  };
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    const RandomQuotientBody b = make_body(36, 1296, {5, s});
    try {
      const L1Witness a = find_l1_subspace(b, {6, s}, o);
      L1Witness c = find_l1_subspace(b, {7, s}, o);
      for (std::uint64_t t = 1; t < 8 && !disjoint(a, c); ++t)
        c = find_l1_subspace(b, {7, s + 1000 * t}, o);
      if (!disjoint(a, c)) continue;
      const double r = a.iso_constant / c.iso_constant;
      stable += r <= 2.0 && r >= 0.5;
      ++compared;
    } catch (const ConditionFailed&) {
    }
  }
  ASSERT_GE(compared, kSeeds / 2);
  EXPECT_GE(static_cast<double>(stable) / static_cast<double>(compared), 0.8);
}

TEST(L2Subspace, LineHasNoDistortion) {
  const RandomQuotientBody b = make_body(4, 16, {8, 0});
  L2Options o;
  o.h = 1;
  const L2Witness w = find_l2_subspace(b, {8, 1}, o);
  EXPECT_NEAR(w.distortion, 1.0, 1e-9);
  EXPECT_LE(reverify(b, w), 1e-9);
}

TEST(L2Subspace, RequiresQuadraticCodimensionUnlessRelaxed) {
  const RandomQuotientBody b = make_body(4, 8, {9, 0});
  EXPECT_THROW(find_l2_subspace(b, {9, 1}), UsageError);
  L2Options o;
  o.allow_relaxation = true;
  o.distortion_samples = 16;
  const L2Witness w = find_l2_subspace(b, {9, 1}, o);
  EXPECT_TRUE(w.relaxed);
  EXPECT_GE(w.compl_constant, 1.0 - 1e-8);
}

TEST(ComplementationNorm, FullSpaceIsOne) {
  const RandomQuotientBody b = make_body(5, 11, {10, 0});
  EXPECT_NEAR(complementation_norm(b, Matrix::identity(5)), 1.0, 1e-8);
}

TEST(ComplementationNorm, CrossPolytopeAxis) {
  const RandomQuotientBody b(Matrix::identity(2));
  EXPECT_NEAR(complementation_norm(b, Matrix::from_columns({{1, 0}})), 1.0, 1e-12);
}

TEST(ComplementationNorm, PlanarNetOracle) {
  const RandomQuotientBody b = make_body(2, 4, {13, 0});
  const oracle::PlanarGauge gauge(b.gamma());
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Matrix basis = haar_subspace(2, 1, {13, 100 + s}).basis;
    const Matrix p = projection_matrix(basis);
    const double net = oracle::planar_operator_norm_by_net(p, gauge, 10000);
    EXPECT_NEAR(complementation_norm(b, basis), net, 1e-3);
  }
}

TEST(Dispatcher, ReachesRequestedDimension) {
  for (const auto& [d, N] : {std::pair<std::size_t, std::size_t>{16, 256}, {25, 625}}) {
    const auto want = static_cast<std::size_t>(std::ceil(0.25 * std::sqrt(static_cast<double>(d))));
    std::size_t ok = 0;
    constexpr std::size_t kSeeds = 50;
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
      const RandomQuotientBody b = make_body(d, N, {14, s});
      try {
        const SubspaceWitness w = dispatch_subspace(b, {15, s});
        ok += witness_dimension(w) >= want;
        EXPECT_EQ(std::holds_alternative<L1Witness>(w),
                  std::log(static_cast<double>(N)) < std::sqrt(static_cast<double>(d)));
      } catch (const ConditionFailed&) {
      }
    }
    EXPECT_GE(static_cast<double>(ok) / kSeeds, 0.9) << "d=" << d;
  }
}

TEST(WitnessJson, RoundTrip) {
  const RandomQuotientBody b = make_body(9, 81, {16, 0});
  const SubspaceWitness l1 = find_l1_subspace(b, {16, 1});
  L2Options o;
  o.distortion_samples = 16;
  const SubspaceWitness l2 = find_l2_subspace(b, {16, 2}, o);
  for (const auto& w : {l1, l2}) {
    const nlohmann::json j = witness_to_json(w);
    const SubspaceWitness back = witness_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(witness_to_json(back), j);
    std::visit([&](const auto& x) { EXPECT_LE(reverify(b, x), 1e-9); }, back);
  }
}
