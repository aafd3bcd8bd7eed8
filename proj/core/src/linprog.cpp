#include "genquot/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "genquot/errors.hpp"

namespace genquot {

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

LinearProgram::LinearProgram(const Matrix& constraint_matrix, Vector objective)
    : m_(constraint_matrix.rows()),
      v_(constraint_matrix.cols()),
      columns_(m_ * v_),
      objective_(std::move(objective)) {
  if (m_ == 0 || v_ == 0) throw UsageError("linear program: empty constraint matrix");
  if (objective_.size() != v_) throw UsageError("linear program: objective length mismatch");
  if (!constraint_matrix.all_finite() || !all_finite(objective_)) {
    throw NumericError("linear program: non-finite data");
  }
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < v_; ++j) columns_[j * m_ + i] = constraint_matrix(i, j);
}

namespace {
// Pivots below this fraction of the largest |α| are treated as round-off.
constexpr double kPivotTol = 1e-7;
constexpr double kOptTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr std::size_t kRefactorEvery = 64;
}  // namespace

// One solve: basis bookkeeping plus the explicit basis inverse. Rows with a
// negative right-hand side are negated on the fly (sign_), which keeps the
// shared column storage untouched.
class SimplexRun {
 public:
  SimplexRun(const LinearProgram& lp, std::span<const double> rhs,
             std::span<const double> objective, const LPOptions& opt)
      : lp_(lp),
        m_(lp.m_),
        v_(lp.v_),
        opt_(opt),
        b_(rhs.begin(), rhs.end()),
        sign_(m_, 1.0),
        objective_(objective) {
    if (b_.size() != m_) throw UsageError("linear program: rhs length mismatch");
    if (objective_.size() != v_) throw UsageError("linear program: objective length mismatch");
    if (!all_finite(objective_)) throw NumericError("linear program: non-finite objective");
    if (!all_finite(b_)) throw NumericError("linear program: non-finite rhs");
    for (std::size_t i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        sign_[i] = -1.0;
        b_[i] = -b_[i];
      }
    }
    max_iter_ = opt.max_iterations ? opt.max_iterations : 50 * (m_ + v_);
  }

  LPSolution run() {
    // Phase 1 starts from the all-artificial basis, B = I.
    basis_.resize(m_);
    position_.assign(v_ + m_, kNonbasic);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = v_ + i;
      position_[v_ + i] = i;
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    xb_ = b_;

    cost_.assign(v_ + m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) cost_[v_ + i] = 1.0;
    if (iterate() == Outcome::unbounded) {
      throw NumericError("linear program: phase 1 reported unbounded");
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= v_) infeas += std::max(0.0, xb_[i]);
    const double bscale = 1.0 + norm_inf(b_);
    if (infeas > opt_.feas_tol * bscale) {
      LPSolution s;
      s.status = LPStatus::infeasible;
      s.iterations = iterations_;
      return s;
    }
    drive_out_artificials();

    for (std::size_t j = 0; j < v_; ++j) cost_[j] = objective_[j];
    for (std::size_t i = 0; i < m_; ++i) cost_[v_ + i] = 0.0;
    if (iterate() == Outcome::unbounded) {
      LPSolution s;
      s.status = LPStatus::unbounded;
      s.iterations = iterations_;
      return s;
    }
    return finish();
  }

 private:
  enum class Outcome { optimal, unbounded };
  static constexpr std::size_t kNonbasic = std::numeric_limits<std::size_t>::max();

  // Column j of the sign-adjusted constraint matrix (artificials are e_i).
  void column(std::size_t j, double* out) const {
    if (j >= v_) {
      std::fill(out, out + m_, 0.0);
      out[j - v_] = 1.0;
      return;
    }
    const double* a = lp_.columns_.data() + j * m_;
    for (std::size_t i = 0; i < m_; ++i) out[i] = sign_[i] * a[i];
  }

  void compute_duals(Vector& y) const {
    y.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = binv_.data() + i * m_;
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * row[k];
    }
  }

  // Entering variable, or kNonbasic when the basis is optimal.
  std::size_t price(const Vector& y, bool bland, const std::vector<std::size_t>& skip) const {
    Vector ys(m_);
    for (std::size_t i = 0; i < m_; ++i) ys[i] = y[i] * sign_[i];
    std::size_t best = kNonbasic;
    double best_d = -kOptTol;
    for (std::size_t j = 0; j < v_; ++j) {
      if (position_[j] != kNonbasic) continue;
      if (!skip.empty() && std::find(skip.begin(), skip.end(), j) != skip.end()) continue;
      const double* a = lp_.columns_.data() + j * m_;
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i) s += ys[i] * a[i];
      const double d = cost_[j] - s;
      if (d < best_d) {
        best = j;
        if (bland) return best;
        best_d = d;
      }
    }
    return best;
  }

  Outcome iterate() {
    Vector y;
    Vector col(m_);
    Vector alpha(m_);
    std::size_t degenerate_run = 0;
    // Candidates whose column has only round-off-sized positive entries;
    // cleared after every pivot.
    std::vector<std::size_t> rejected;
    for (;;) {
      if (iterations_ >= max_iter_) {
        throw SolverStall("linear program: iteration cap " + std::to_string(max_iter_) +
                          " exceeded");
      }
      if (since_refactor_ >= kRefactorEvery) refactor();
      compute_duals(y);
      const bool bland = degenerate_run > m_;
      const std::size_t q = price(y, bland, rejected);
      if (q == kNonbasic) return Outcome::optimal;

      column(q, col.data());
      for (std::size_t i = 0; i < m_; ++i) {
        const double* row = binv_.data() + i * m_;
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += row[k] * col[k];
        alpha[i] = s;
      }

      const std::size_t r = ratio_test(alpha, bland);
      if (r == kNonbasic) {
        if (std::none_of(alpha.begin(), alpha.end(), [](double a) { return a > 0.0; })) {
          return Outcome::unbounded;
        }
        rejected.push_back(q);
        continue;
      }
      rejected.clear();
      const double theta = std::max(0.0, xb_[r]) / alpha[r];
      degenerate_run = theta <= kDegenerateStep ? degenerate_run + 1 : 0;
      pivot(r, q, alpha, theta);
      ++iterations_;
    }
  }

  // Harris two-pass ratio test: find the loosest step that keeps every basic
  // variable above −feas_tol, then take the largest pivot within it. In Bland
  // mode ties go to the smallest variable index.
  std::size_t ratio_test(const Vector& alpha, bool bland) const {
    const double delta = opt_.feas_tol;
    const double tol = kPivotTol * std::max(1.0, norm_inf(alpha));
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i) {
      if (alpha[i] > tol) bound = std::min(bound, (std::max(0.0, xb_[i]) + delta) / alpha[i]);
    }
    if (!std::isfinite(bound)) return kNonbasic;
    std::size_t best = kNonbasic;
    double best_alpha = 0.0;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i) {
      if (alpha[i] <= tol) continue;
      const double ratio = std::max(0.0, xb_[i]) / alpha[i];
      if (ratio > bound) continue;
      if (bland) {
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && (best == kNonbasic || basis_[i] < basis_[best]))) {
          best = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      } else if (alpha[i] > best_alpha) {
        best = i;
        best_alpha = alpha[i];
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t q, const Vector& alpha, double theta) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      xb_[i] -= theta * alpha[i];
      if (xb_[i] < 0.0 && xb_[i] > -opt_.feas_tol) xb_[i] = 0.0;
    }
    xb_[r] = theta;

    double* prow = binv_.data() + r * m_;
    const double inv = 1.0 / alpha[r];
    for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      double* row = binv_.data() + i * m_;
      const double f = alpha[i];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }

    position_[basis_[r]] = kNonbasic;
    basis_[r] = q;
    position_[q] = r;
    ++since_refactor_;
  }

  // Rebuilds B⁻¹ from the basis columns by Gauss-Jordan with partial pivoting
  // and recomputes x_B = B⁻¹b.
  void refactor() {
    Vector a(m_ * m_);
    Vector col(m_);
    for (std::size_t p = 0; p < m_; ++p) {
      column(basis_[p], col.data());
      for (std::size_t i = 0; i < m_; ++i) a[i * m_ + p] = col[i];
    }
    Vector inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t i = c + 1; i < m_; ++i)
        if (std::abs(a[i * m_ + c]) > std::abs(a[piv * m_ + c])) piv = i;
      const double pv = a[piv * m_ + c];
      if (std::abs(pv) < 1e-13) throw NumericError("linear program: singular basis");
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(a[piv * m_ + k], a[c * m_ + k]);
          std::swap(inv[piv * m_ + k], inv[c * m_ + k]);
        }
      }
      const double ip = 1.0 / pv;
      for (std::size_t k = 0; k < m_; ++k) {
        a[c * m_ + k] *= ip;
        inv[c * m_ + k] *= ip;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == c) continue;
        const double f = a[i * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          a[i * m_ + k] -= f * a[c * m_ + k];
          inv[i * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    binv_ = std::move(inv);
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = binv_.data() + i * m_;
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += row[k] * b_[k];
      xb_[i] = (s < 0.0 && s > -opt_.feas_tol) ? 0.0 : s;
    }
    since_refactor_ = 0;
  }

  // After phase 1, swaps zero-level artificials for structural columns. An
  // artificial whose row of B⁻¹A vanishes marks a redundant constraint and
  // stays basic at zero; it can never move since its row never pivots.
  void drive_out_artificials() {
    Vector col(m_);
    Vector alpha(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < v_) continue;
      const double* brow = binv_.data() + r * m_;
      std::size_t best = kNonbasic;
      double best_abs = 1e-7;
      for (std::size_t j = 0; j < v_; ++j) {
        if (position_[j] != kNonbasic) continue;
        column(j, col.data());
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += brow[k] * col[k];
        if (std::abs(s) > best_abs) {
          best_abs = std::abs(s);
          best = j;
        }
      }
      if (best == kNonbasic) continue;
      column(best, col.data());
      for (std::size_t i = 0; i < m_; ++i) {
        const double* row = binv_.data() + i * m_;
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += row[k] * col[k];
        alpha[i] = s;
      }
      xb_[r] = 0.0;
      pivot(r, best, alpha, 0.0);
    }
    refactor();
  }

  LPSolution finish() {
    refactor();
    Vector x(v_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < v_) x[basis_[i]] = std::max(0.0, xb_[i]);
    }
    Vector y;
    compute_duals(y);
    for (std::size_t i = 0; i < m_; ++i) y[i] *= sign_[i];

    double residual = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < v_; ++j) {
        if (x[j] != 0.0) s += lp_.columns_[j * m_ + i] * x[j];
      }
      residual = std::max(residual, std::abs(s - sign_[i] * b_[i]));
    }
    double primal = 0.0;
    for (std::size_t j = 0; j < v_; ++j) primal += objective_[j] * x[j];
    double dual = 0.0;
    for (std::size_t i = 0; i < m_; ++i) dual += sign_[i] * b_[i] * y[i];

    const double bscale = 1.0 + norm_inf(b_);
    if (residual > opt_.feas_tol * bscale) {
      throw NumericError("linear program: primal residual " + std::to_string(residual) +
                         " exceeds tolerance");
    }
    const double gap = std::abs(primal - dual);
    if (gap > opt_.gap_tol * (1.0 + std::abs(primal))) {
      throw NumericError("linear program: duality gap " + std::to_string(gap) +
                         " exceeds tolerance");
    }

    LPSolution s;
    s.status = LPStatus::optimal;
    s.point = std::move(x);
    s.objective_value = primal;
    s.dual_point = std::move(y);
    s.primal_residual = residual;
    s.duality_gap = gap;
    s.iterations = iterations_;
    return s;
  }

  const LinearProgram& lp_;
  std::size_t m_;
  std::size_t v_;
  LPOptions opt_;
  Vector b_;
  Vector sign_;
  std::span<const double> objective_;
  std::size_t max_iter_ = 0;

  std::vector<std::size_t> basis_;
  std::vector<std::size_t> position_;
  Vector binv_;
  Vector xb_;
  Vector cost_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
};

LPSolution LinearProgram::solve(std::span<const double> rhs, const LPOptions& options) const {
  return SimplexRun(*this, rhs, objective_, options).run();
}

LPSolution LinearProgram::solve(std::span<const double> rhs, std::span<const double> objective,
                                const LPOptions& options) const {
  return SimplexRun(*this, rhs, objective, options).run();
}

LPSolution solve_lp(const LPProblem& problem, const LPOptions& options) {
  const auto& a = problem.constraint_matrix;
  if (problem.rhs.size() != a.rows()) throw UsageError("solve_lp: rhs length mismatch");
  LinearProgram lp(a, problem.objective);
  return lp.solve(problem.rhs, options);
}

std::string format_lp(const LPProblem& problem) {
  std::ostringstream os;
  write_matrix_text(os, problem.constraint_matrix);
  char buf[40];
  os << "rhs";
  for (double b : problem.rhs) {
    std::snprintf(buf, sizeof buf, " %.17g", b);
    os << buf;
  }
  os << "\nobjective";
  for (double c : problem.objective) {
    std::snprintf(buf, sizeof buf, " %.17g", c);
    os << buf;
  }
  os << '\n';
  return os.str();
}

}  // namespace genquot
