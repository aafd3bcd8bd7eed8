#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genquot/linprog.hpp"
#include "genquot/matrix.hpp"
#include "genquot/random.hpp"

namespace genquot {

/// B = absconv{g_1, …, g_N} = Γ(B_1^N) ⊂ R^n, the unit ball of a quotient of
/// ℓ1^N. Immutable after construction; all queries are safe to run
/// concurrently.
class RandomQuotientBody {
 public:
  /// Wraps an explicit n×N matrix (used for injected test bodies such as
  /// Γ = I). Throws NumericError if Γ is not of full row rank.
  explicit RandomQuotientBody(Matrix gamma, SeedSpec seed = {});

  std::size_t n() const noexcept { return gamma_.rows(); }
  std::size_t N() const noexcept { return gamma_.cols(); }
  const Matrix& gamma() const noexcept { return gamma_; }
  const SeedSpec& seed() const noexcept { return seed_; }
  const Vector& column_norms() const noexcept { return column_norms_; }
  /// g_j as a contiguous view.
  std::span<const double> column(std::size_t j) const {
    return gamma_t_.row(j);
  }

  /// max_j ‖g_j‖₂; exact since B is the hull of ±g_j.
  double circumradius() const noexcept { return circumradius_; }
  double sigma_min() const noexcept { return sigma_min_; }
  /// Certified lower bound on the inradius: B ⊇ Γ(N^{-1/2}B_2^N) ⊇
  /// σ_min(Γ)·N^{-1/2}·D.
  double certified_inradius() const noexcept { return certified_inradius_; }

  /// Γᵀu, i.e. the inner products ⟨g_j, u⟩.
  Vector inner_products(std::span<const double> u) const;

  const LinearProgram& l1_program() const noexcept { return *l1_program_; }

 private:
  Matrix gamma_;
  Matrix gamma_t_;  // N × n, row j is g_j
  SeedSpec seed_;
  Vector column_norms_;
  double circumradius_ = 0.0;
  double sigma_min_ = 0.0;
  double certified_inradius_ = 0.0;
  std::shared_ptr<const LinearProgram> l1_program_;  // min ‖t‖₁ s.t. Γt = x
};

/// Γ with i.i.d. N(0, 1/n) entries. Requires 1 ≤ n ≤ N.
RandomQuotientBody make_body(std::size_t n, std::size_t N, const SeedSpec& seed);

/// Gauge value with its certificates: a representation x = Γt with
/// ‖t‖₁ = value, and a dual point u with max_j |⟨g_j,u⟩| ≤ 1, ⟨x,u⟩ = value.
struct GaugeResult {
  double value = 0.0;
  Vector representation;
  Vector dual_point;
};

/// ‖x‖_B = min{‖t‖₁ : Γt = x}. Throws NotInSpan if x is outside the column
/// span.
double body_norm(const RandomQuotientBody& body, std::span<const double> x);
GaugeResult body_norm_certified(const RandomQuotientBody& body, std::span<const double> x);

/// Support function h_B(u) = max_j |⟨g_j, u⟩|, the dual norm.
double dual_norm(const RandomQuotientBody& body, std::span<const double> u);

struct MaxGauge {
  double value = 0.0;
  std::size_t argmax = 0;
  std::size_t lp_solves = 0;
};

/// max_i ‖v_i‖_B. Optional `upper_bounds[i] ≥ ‖v_i‖_B` let the search skip
/// vectors that cannot beat the running maximum; the result stays exact.
MaxGauge max_body_norm(const RandomQuotientBody& body, const std::vector<Vector>& vectors,
                       std::span<const double> upper_bounds = {});

/// ‖T : X_n → X_n‖ = max_j ‖T g_j‖_B.
double operator_norm(const RandomQuotientBody& body, const Matrix& t);
MaxGauge operator_norm_detail(const RandomQuotientBody& body, const Matrix& t);

struct RadiiEstimate {
  double circumradius = 0.0;
  /// min of h_B over the directions visited; an upper bound on the inradius.
  double inradius_estimate = 0.0;
  Vector inradius_certificate;  // unit direction attaining inradius_estimate
  bool exact = false;           // set when n ≤ 2 and the minimum is enumerated
};

struct RadiiOptions {
  std::size_t restarts = 64;
  std::size_t steps = 500;
  double initial_step = 0.3;
  double step_decay = 0.97;
};

RadiiEstimate radii(const RandomQuotientBody& body, const SeedSpec& seed,
                    const RadiiOptions& options = {});

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// M*_B: mean of h_B over uniform directions on the sphere.
MonteCarloEstimate mean_width(const RandomQuotientBody& body, std::size_t samples,
                              const SeedSpec& seed);

struct VolumeRatio {
  double ratio_per_dim = 0.0;  // (vol B / vol D)^{1/n}
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t hits = 0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kVolumeDimensionCap = 8;

/// Rejection sampling in the circumscribed ball with the membership test
/// ‖x‖_B ≤ 1 + 1e-8; the interval is the 95% Wilson interval pushed through
/// the 1/n power.
VolumeRatio volume_ratio(const RandomQuotientBody& body, std::size_t samples,
                         const SeedSpec& seed);

struct SectionDistortion {
  double max_gauge = 0.0;
  double min_gauge = 0.0;
  double distortion() const { return min_gauge > 0.0 ? max_gauge / min_gauge : 0.0; }
};

/// Extremes of ‖x‖_B over unit x in the subspace, from sampled directions
/// followed by monotone ascent/descent steps driven by LP certificates. The
/// ratio is a lower bound on the true distortion of the section.
SectionDistortion section_distortion(const RandomQuotientBody& body, const Matrix& basis,
                                     std::size_t samples, const SeedSpec& seed);

/// max{⟨w, x⟩ : x ∈ B ∩ G} where G is spanned by the orthonormal `basis`;
/// the LP is built once and reused across directions w.
class SectionSupport {
 public:
  SectionSupport(const RandomQuotientBody& body, const Matrix& basis);
  double operator()(std::span<const double> w) const { return maximize(w).first; }
  /// Support value and a maximizing point of B ∩ G.
  std::pair<double, Vector> maximize(std::span<const double> w) const;

 private:
  const RandomQuotientBody* body_;
  Vector rhs_;
  std::shared_ptr<const LinearProgram> lp_;
};

double section_support(const RandomQuotientBody& body, const Matrix& basis,
                       std::span<const double> w);

/// "GENQUOT-BODY v1 n N master_seed stream_index" followed by Γ in matrix text.
void write_body(std::ostream& os, const RandomQuotientBody& body);
RandomQuotientBody read_body(std::istream& is);
void save_body(const std::string& path, const RandomQuotientBody& body);
RandomQuotientBody load_body(const std::string& path);

}  // namespace genquot
