#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "genquot/body.hpp"
#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"
#include "genquot/snumbers.hpp"
#include "oracles.hpp"

using namespace genquot;

namespace {

BracketOptions opts(std::uint64_t seed, std::size_t samples = 16) {
  BracketOptions o;
  o.samples = samples;
  o.seed = {seed, 0};
  return o;
}

}  // namespace

TEST(EuclideanSNumbers, HalfProjection) {
  const double d[] = {1, 1, 1, 0, 0, 0};
  const Vector s = euclidean_s_numbers(Matrix::diagonal(d));
  EXPECT_NEAR(s[2], 1.0, 1e-14);
  EXPECT_NEAR(s[3], 0.0, 1e-14);
}

TEST(EuclideanSNumbers, RankDeficient) {
  const Matrix a = gaussian_matrix(6, 2, 1.0, {1, 0});
  const Matrix b = gaussian_matrix(2, 6, 1.0, {1, 1});
  const Vector s = euclidean_s_numbers(a * b);
  for (std::size_t i = 2; i < 6; ++i) EXPECT_NEAR(s[i], 0.0, 1e-10);
}

TEST(EuclideanSNumbers, SubspaceNetOracle) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Matrix t = gaussian_matrix(3, 3, 1.0, {2, seed});
    const Vector s = euclidean_s_numbers(t);
    for (std::size_t k = 1; k <= 3; ++k) {
      const double net = oracle::gelfand_by_net_3d(t, k, 10000);
      EXPECT_GE(net, s[k - 1] - 1e-2) << "k=" << k;
      EXPECT_LE(net, s[k - 1] + 5e-2) << "k=" << k;
    }
  }
}

TEST(GelfandBracket, IdentityContainsOne) {
  const RandomQuotientBody b = make_body(5, 12, {3, 0});
  for (std::size_t k = 1; k <= 5; ++k) {
    const SNumberBracket br = gelfand_bracket(b, Matrix::identity(5), k, false, opts(4));
    EXPECT_LE(br.lower, 1.0 + 1e-9);
    EXPECT_GE(br.upper, 1.0 - 1e-9);
  }
}

TEST(GelfandBracket, ZeroOperator) {
  const RandomQuotientBody b = make_body(4, 9, {5, 0});
  for (bool dual : {false, true}) {
    const SNumberBracket br = gelfand_bracket(b, Matrix(4, 4), 2, dual, opts(5));
    EXPECT_EQ(br.lower, 0.0);
    EXPECT_EQ(br.upper, 0.0);
  }
}

TEST(GelfandBracket, FirstIsOperatorNorm) {
  const RandomQuotientBody b = make_body(2, 4, {11, 0});
  const Matrix t = gaussian_matrix(2, 2, 1.0, {11, 1});
  const SNumberBracket br = gelfand_bracket(b, t, 1, false, opts(6));
  const double q = operator_norm(b, t);
  EXPECT_LE(br.lower, q + 1e-6);
  EXPECT_GE(br.upper, q - 1e-6);
  EXPECT_EQ(br.upper_kind, BoundKind::exact);
  const oracle::PlanarGauge gauge(b.gamma());
  EXPECT_NEAR(q, oracle::planar_operator_norm_by_net(t, gauge, 10000), 1e-3);
}

TEST(GelfandBracket, RejectsBadIndex) {
  const RandomQuotientBody b = make_body(3, 6, {7, 0});
  EXPECT_THROW(gelfand_bracket(b, Matrix::identity(3), 0), UsageError);
  EXPECT_THROW(gelfand_bracket(b, Matrix::identity(3), 4), UsageError);
  EXPECT_THROW(gelfand_bracket(b, Matrix::identity(2), 1), UsageError);
}

TEST(GelfandBracketProperty, MonotoneAndHomogeneous) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const RandomQuotientBody b = make_body(6, 14, {8, s});
    const Matrix t = gaussian_matrix(6, 6, 1.0 / 6.0, {9, s});
    for (bool dual : {false, true}) {
      const auto br = gelfand_brackets(b, t, dual, 0, opts(10 + s));
      ASSERT_EQ(br.size(), 6u);
      const auto br3 = gelfand_brackets(b, 3.0 * t, dual, 0, opts(10 + s));
      for (std::size_t k = 0; k < br.size(); ++k) {
        EXPECT_LE(br[k].lower, br[k].upper + 1e-12);
        if (k > 0) {
          EXPECT_LE(br[k].lower, br[k - 1].lower + 1e-9);
          EXPECT_LE(br[k].upper, br[k - 1].upper + 1e-9);
        }
        EXPECT_NEAR(br3[k].lower, 3.0 * br[k].lower, 1e-9 * (1.0 + br3[k].lower));
        EXPECT_NEAR(br3[k].upper, 3.0 * br[k].upper, 1e-9 * (1.0 + br3[k].upper));
      }
    }
  }
}

TEST(MinOverShifts, ScalarIsAnnihilated) {
  const RandomQuotientBody b = make_body(4, 9, {12, 0});
  const ShiftSearchResult r = min_over_shifts(b, 5.0 * Matrix::identity(4), 2, 201, opts(12));
  EXPECT_NEAR(r.best_shift, 5.0, 20.0 / 200.0);
  EXPECT_NEAR(r.best_proxy, 0.0, 1e-9);
  EXPECT_NEAR(r.bracket_at_best.upper, 0.0, 1e-9);
}

TEST(MinOverShifts, TwoEigenvalues) {
  const RandomQuotientBody b = make_body(4, 9, {13, 0});
  const double d[] = {1, 1, 0, 0};
  const ShiftSearchResult r = min_over_shifts(b, Matrix::diagonal(d), 2, 201, opts(13));
  EXPECT_NEAR(r.best_proxy, 0.5, 1e-9);
  EXPECT_NEAR(r.best_shift, 0.5, 1e-6);
}

TEST(MinOverShifts, SkewRotation) {
  const RandomQuotientBody b = make_body(2, 5, {14, 0});
  const Matrix t(2, 2, {0, 1, -1, 0});
  const ShiftSearchResult r = min_over_shifts(b, t, 1, 201, opts(14));
  EXPECT_NEAR(r.best_shift, 0.0, 1e-9);
  EXPECT_NEAR(r.best_proxy, 1.0, 1e-12);
}

TEST(MinOverShiftsProperty, DominanceAndTranslation) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const RandomQuotientBody b = make_body(4, 8, {15, s});
    const Matrix t = gaussian_matrix(4, 4, 0.25, {16, s});
    const ShiftSearchResult r = min_over_shifts(b, t, 2, 201, opts(17));
    EXPECT_LE(r.best_proxy, euclidean_s_numbers(t)[1] + 1e-12);
    bool has_zero = false;
    for (const auto& [lam, v] : r.grid) has_zero = has_zero || lam == 0.0;
    EXPECT_TRUE(has_zero);

    // Exact powers of two keep T + μ·Id − (λ + μ)·Id bit-identical.
    const double mu = 0.25;
    const ShiftSearchResult moved = min_over_shifts(b, t + mu * Matrix::identity(4), 2, 201, opts(17));
    EXPECT_NEAR(moved.best_proxy, r.best_proxy, 1e-9);
    const double res = 4.0 * std::max(r.window, moved.window) / 200.0;
    EXPECT_NEAR(moved.best_shift, r.best_shift + mu, res);
    EXPECT_NEAR(moved.bracket_at_best.lower, r.bracket_at_best.lower, 1e-6);
  }
}

TEST(GelfandSum, IdentityHasZeroSum) {
  const RandomQuotientBody b = make_body(3, 7, {18, 0});
  const GelfandSumResult r = gelfand_sum_bracket(b, Matrix::identity(3), 201, opts(18));
  EXPECT_NEAR(r.traceless_shift, 1.0, 1e-15);
  EXPECT_NEAR(r.proxy, 0.0, 1e-12);
  EXPECT_NEAR(r.upper, 0.0, 1e-12);
}

TEST(GelfandSum, DiagonalPlusMinus) {
  const RandomQuotientBody b = make_body(2, 5, {19, 0});
  const double d[] = {1, -1};
  const GelfandSumResult r = gelfand_sum_bracket(b, Matrix::diagonal(d), 201, opts(19));
  EXPECT_NEAR(r.traceless_shift, 0.0, 1e-15);
  EXPECT_NEAR(r.proxy, 2.0, 1e-9);
  const double factor = b.circumradius() / b.certified_inradius();
  EXPECT_LE(r.lower, r.upper);
  EXPECT_GE(r.lower, 2.0 / factor / factor - 1e-9);
  EXPECT_LE(r.upper, 2.0 * factor * factor + 1e-9);
}

TEST(GelfandSum, ShiftNeverWorseThanZero) {
  const RandomQuotientBody b = make_body(8, 20, {20, 0});
  const Matrix t = gaussian_matrix(8, 8, 1.0 / 8.0, {21, 0});
  const GelfandSumResult r = gelfand_sum_bracket(b, t, 201, opts(21));
  double sum = 0.0;
  for (double v : euclidean_s_numbers(t)) sum += v;
  EXPECT_LE(r.proxy, sum + 1e-12);
}

TEST(MnWitness, Rotation) {
  const Matrix rot(2, 2, {0, -1, 1, 0});
  const MnWitness w = mn_witness_check(rot, Matrix::from_columns({{1, 0}}), 1.0);
  EXPECT_NEAR(w.achieved, 1.0, 1e-12);
  EXPECT_TRUE(w.member());
}

TEST(MnWitness, IdentityIsNotMember) {
  const Matrix f = haar_subspace(5, 2, {22, 0}).basis;
  const MnWitness w = mn_witness_check(Matrix::identity(5), f, 0.1);
  EXPECT_NEAR(w.achieved, 0.0, 1e-12);
  EXPECT_FALSE(w.member());
}

TEST(MnWitness, SamplingOracle) {
  const Matrix t = gaussian_matrix(6, 6, 1.0, {23, 0});
  const SvdResult sv = svd(t);
  Matrix f(6, 3);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j) f(i, j) = sv.right_basis(i, j);
  const MnWitness w = mn_witness_check(t, f, 0.0);

  // min over unit x ∈ F of ‖(Id − FFᵀ)Tx‖₂ by sampling coefficients.
  Rng rng({23, 1});
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10000; ++i) {
    const Vector c = sphere_point(3, rng);
    const Vector x = f * c;
    Vector y = t * x;
    const Vector p = orth_project(f, y);
    for (std::size_t r = 0; r < 6; ++r) y[r] -= p[r];
    best = std::min(best, norm2(y));
  }
  EXPECT_LE(w.achieved, best + 1e-12);
  EXPECT_NEAR(w.achieved, best, 1e-3 * (1.0 + best) + 0.02 * best);
}

TEST(MnWitness, RejectsNonOrthonormal) {
  EXPECT_THROW(mn_witness_check(Matrix::identity(2), Matrix::from_columns({{1, 1}}), 0.1),
               UsageError);
}

TEST(HsBound, Identity) {
  const RandomQuotientBody b = make_body(6, 10, {24, 0});
  const HsCheck h = hs_of_normalized(b, Matrix::identity(6));
  EXPECT_NEAR(h.hs, std::sqrt(6.0), 1e-8);
  EXPECT_TRUE(h.ok);
  EXPECT_THROW(hs_of_normalized(b, Matrix(6, 6)), UsageError);
}

TEST(HsBound, GaussianOperatorsNeverViolate) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const RandomQuotientBody b = make_body(8, 64, {25, s});
    const HsCheck h = hs_of_normalized(b, gaussian_matrix(8, 8, 1.0, {26, s}));
    EXPECT_TRUE(h.ok) << "seed " << s << " hs " << h.hs;
    EXPECT_LE(h.hs, std::sqrt(64.0) + 1e-6);
  }
}

TEST(HsBound, RankOne) {
  const RandomQuotientBody b = make_body(5, 9, {27, 0});
  const auto g = b.column(0);
  Rng rng({27, 1});
  const Vector u = gaussian_vector(5, 1.0, rng);
  Matrix t(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) t(i, j) = g[i] * u[j];
  const HsCheck h = hs_of_normalized(b, t);
  EXPECT_NEAR(h.hs, norm2(g) * norm2(u) / operator_norm(b, t), 1e-9);
  EXPECT_TRUE(h.ok);
}

// This body/operator pair once drove the simplex into a pivot on a
// round-off-sized entry, leaving a singular basis.
TEST(MinOverShifts, SurvivesNearDegeneratePivots) {
  const SeedSpec seed{7, 106};
  const RandomQuotientBody b = make_body(32, 64, seed.derive(1));
  const Matrix t = haar_orthogonal(32, seed.derive(5));
  BracketOptions o;
  o.samples = 32;
  o.seed = seed.derive(9);
  EXPECT_NO_THROW(min_over_shifts(b, t, 16, 201, o));
}
