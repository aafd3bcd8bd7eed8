#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "genquot/matrix.hpp"

namespace genquot {

/// min cᵀx subject to Ax = b, x ≥ 0.
struct LPProblem {
  Matrix constraint_matrix;  // m × v
  Vector rhs;                // m
  Vector objective;          // v
};

enum class LPStatus { optimal, infeasible, unbounded };

std::string to_string(LPStatus status);

struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  std::optional<Vector> point;
  std::optional<double> objective_value;
  /// Simplex multipliers y with Aᵀy ≤ c; bᵀy equals the optimum.
  std::optional<Vector> dual_point;
  double primal_residual = 0.0;  // ‖Ax − b‖∞ at the returned point
  double duality_gap = 0.0;      // |cᵀx − bᵀy|
  std::size_t iterations = 0;
};

struct LPOptions {
  double feas_tol = 1e-9;
  double gap_tol = 1e-8;
  /// 0 selects the default cap of 50·(m + v).
  std::size_t max_iterations = 0;
};

/// A constraint matrix and objective prepared once and solved for many
/// right-hand sides. Immutable after construction; solve() is thread-safe.
class LinearProgram {
 public:
  LinearProgram(const Matrix& constraint_matrix, Vector objective);

  std::size_t rows() const noexcept { return m_; }
  std::size_t vars() const noexcept { return v_; }

  LPSolution solve(std::span<const double> rhs, const LPOptions& options = {}) const;
  /// Same constraints with a different objective for this solve only.
  LPSolution solve(std::span<const double> rhs, std::span<const double> objective,
                   const LPOptions& options = {}) const;

 private:
  friend class SimplexRun;
  std::size_t m_;
  std::size_t v_;
  std::vector<double> columns_;  // column-major copy of A
  Vector objective_;
};

/// Dense revised simplex: Dantzig pricing with a switch to Bland's rule after
/// a run of degenerate pivots, Harris two-pass ratio test, phase 1 through
/// artificial variables. Throws NumericError on non-finite data and
/// SolverStall when the iteration cap is hit.
LPSolution solve_lp(const LPProblem& problem, const LPOptions& options = {});

/// Debug dump: matrix text of A, then one line "rhs b…" and one line
/// "objective c…".
std::string format_lp(const LPProblem& problem);

}  // namespace genquot
