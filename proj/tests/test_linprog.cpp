#include <gtest/gtest.h>

#include <cmath>

#include "genquot/errors.hpp"
#include "genquot/linprog.hpp"
#include "genquot/random.hpp"
#include "oracles.hpp"

using namespace genquot;

TEST(SolveLp, SimplexOnSegment) {
  const LPSolution s = solve_lp({Matrix(1, 2, 1.0), {1.0}, {1.0, 1.0}});
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(*s.objective_value, 1.0, 1e-12);
}

TEST(SolveLp, Infeasible) {
  const LPSolution s = solve_lp({Matrix(1, 1, 1.0), {-1.0}, {1.0}});
  EXPECT_EQ(s.status, LPStatus::infeasible);
  EXPECT_FALSE(s.point.has_value());
}

TEST(SolveLp, SharedColumnIsOptimal) {
  const LPSolution s = solve_lp({Matrix(2, 3, {1, 0, 1, 0, 1, 1}), {1, 1}, {1, 1, 1}});
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(*s.objective_value, 1.0, 1e-12);
  EXPECT_NEAR((*s.point)[0], 0.0, 1e-12);
  EXPECT_NEAR((*s.point)[1], 0.0, 1e-12);
  EXPECT_NEAR((*s.point)[2], 1.0, 1e-12);
  const auto e = oracle::lp_by_enumeration(Matrix(2, 3, {1, 0, 1, 0, 1, 1}), {1, 1}, {1, 1, 1});
  ASSERT_TRUE(e.has_value());
  EXPECT_NEAR(*e, 1.0, 1e-12);
}

TEST(SolveLp, Unbounded) {
  // min −x₁ s.t. x₁ − x₂ = 0.
  const LPSolution s = solve_lp({Matrix(1, 2, {1, -1}), {0.0}, {-1.0, 0.0}});
  EXPECT_EQ(s.status, LPStatus::unbounded);
}

TEST(SolveLp, NonFiniteThrows) {
  EXPECT_THROW(solve_lp({Matrix(1, 1, 1.0), {std::nan("")}, {1.0}}), NumericError);
}

TEST(SolveLp, IterationCapThrowsStall) {
  const Matrix a = gaussian_matrix(4, 8, 1.0, {1, 1});
  Rng rng({1, 2});
  const Vector x = {1, 0, 2, 0, 1, 0, 0, 3};
  LPOptions o;
  o.max_iterations = 1;
  Vector c(8, 1.0);
  EXPECT_THROW(solve_lp({a, a * x, c}, o), SolverStall);
}

TEST(SolveLp, DimensionMismatchThrows) {
  EXPECT_THROW(solve_lp({Matrix(2, 2, 1.0), {1.0}, {1.0, 1.0}}), UsageError);
}

TEST(FormatLp, ContainsRhsAndObjective) {
  const std::string s = format_lp({Matrix(1, 2, 1.0), {1.0}, {1.0, 2.0}});
  EXPECT_NE(s.find("rhs"), std::string::npos);
  EXPECT_NE(s.find("objective"), std::string::npos);
}

// Random bounded instances: A Gaussian, b = A·x₀ with x₀ ≥ 0 (feasible), c > 0
// (bounded); occasionally b random so some instances are infeasible.
TEST(SolveLpProperty, AgreesWithEnumerationAndDuality) {
  std::size_t infeasible = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    const std::size_t m = 1 + s % 4;
    const std::size_t v = m + 1 + (s / 4) % (9 - m - 1);
    Rng rng({21, s});
    const Matrix a = gaussian_matrix(m, v, 1.0, {22, s});
    Vector b(m);
    if (s % 5 == 0) {
      for (auto& x : b) x = rng.normal();
    } else {
      Vector x0(v, 0.0);
      for (auto& x : x0) x = rng.uniform() < 0.5 ? 0.0 : rng.uniform() * 2.0;
      b = a * x0;
    }
    Vector c(v);
    for (auto& x : c) x = 0.1 + rng.uniform();

    const LPSolution sol = solve_lp({a, b, c});
    const auto ref = oracle::lp_by_enumeration(a, b, c);
    if (!ref) {
      EXPECT_EQ(sol.status, LPStatus::infeasible) << "seed " << s;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(sol.status, LPStatus::optimal) << "seed " << s;
    EXPECT_NEAR(*sol.objective_value, *ref, 1e-8 * (1.0 + std::abs(*ref))) << "seed " << s;

    ASSERT_TRUE(sol.dual_point.has_value());
    const double dual_obj = dot(b, *sol.dual_point);
    EXPECT_LE(dual_obj, *sol.objective_value + 1e-8);
    const Vector aty = multiply_transposed(a, *sol.dual_point);
    for (std::size_t j = 0; j < v; ++j) EXPECT_LE(aty[j], c[j] + 1e-8);
    EXPECT_LE(sol.primal_residual, 1e-9 * (1.0 + norm_inf(b)));

    const double scale = 0.5 + 3.0 * rng.uniform();
    Vector bs = b;
    for (auto& x : bs) x *= scale;
    const LPSolution scaled = solve_lp({a, bs, c});
    ASSERT_EQ(scaled.status, LPStatus::optimal);
    EXPECT_NEAR(*scaled.objective_value, scale * *sol.objective_value,
                1e-9 * (1.0 + std::abs(scale * *sol.objective_value)));
  }
  EXPECT_GT(infeasible, 0u);
}

TEST(LinearProgram, ReusedAcrossRightHandSides) {
  const Matrix a = gaussian_matrix(3, 7, 1.0, {30, 0});
  const LinearProgram lp(a, Vector(7, 1.0));
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng({31, s});
    Vector x0(7);
    for (auto& x : x0) x = rng.uniform();
    const Vector b = a * x0;
    const LPSolution one = lp.solve(b);
    const LPSolution fresh = solve_lp({a, b, Vector(7, 1.0)});
    ASSERT_EQ(one.status, LPStatus::optimal);
    EXPECT_NEAR(*one.objective_value, *fresh.objective_value, 1e-10);
  }
}
