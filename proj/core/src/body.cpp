#include "genquot/body.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"

namespace genquot {
namespace {

// [Γ, −Γ]: the ℓ1 minimization min ‖t‖₁ s.t. Γt = x with t = t⁺ − t⁻.
std::shared_ptr<const LinearProgram> make_l1_program(const Matrix& gamma) {
  const std::size_t n = gamma.rows();
  const std::size_t N = gamma.cols();
  Matrix split(n, 2 * N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      split(i, j) = gamma(i, j);
      split(i, N + j) = -gamma(i, j);
    }
  return std::make_shared<const LinearProgram>(split, Vector(2 * N, 1.0));
}

// Exact minimum of h_B over the unit circle: on each arc where a single
// |⟨g_j,u⟩| dominates, that function is concave, so the minimum sits where
// two of them cross, i.e. u ⊥ g_i ± g_j.
std::pair<double, Vector> planar_inradius(const RandomQuotientBody& body) {
  const std::size_t N = body.N();
  double best = std::numeric_limits<double>::infinity();
  Vector best_u{1.0, 0.0};
  auto consider = [&](double a, double b) {
    const double nrm = std::hypot(a, b);
    if (nrm == 0.0) return;
    const Vector u{-b / nrm, a / nrm};
    const double h = dual_norm(body, u);
    if (h < best) {
      best = h;
      best_u = u;
    }
  };
  for (std::size_t i = 0; i < N; ++i) {
    const auto gi = body.column(i);
    for (std::size_t j = i + 1; j < N; ++j) {
      const auto gj = body.column(j);
      consider(gi[0] + gj[0], gi[1] + gj[1]);
      consider(gi[0] - gj[0], gi[1] - gj[1]);
    }
  }
  if (N == 1) consider(body.column(0)[0], body.column(0)[1]);
  return {best, best_u};
}

constexpr std::size_t kPlanarExactLimit = 400;
constexpr double kMembershipTol = 1e-8;

}  // namespace

RandomQuotientBody::RandomQuotientBody(Matrix gamma, SeedSpec seed)
    : gamma_(std::move(gamma)), seed_(seed) {
  const std::size_t n = gamma_.rows();
  const std::size_t N = gamma_.cols();
  if (n == 0 || N == 0) throw UsageError("body: empty generator matrix");
  if (N < n) throw UsageError("body: need N >= n");
  if (!gamma_.all_finite()) throw NumericError("body: non-finite generator matrix");
  gamma_t_ = gamma_.transpose();
  column_norms_.resize(N);
  for (std::size_t j = 0; j < N; ++j) column_norms_[j] = norm2(column(j));
  circumradius_ = *std::max_element(column_norms_.begin(), column_norms_.end());

  // σ_min(Γ) through the Gram matrix ΓΓᵀ, whose singular values are σ².
  Matrix gram(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const double s = dot(gamma_.row(a), gamma_.row(b));
      gram(a, b) = s;
      gram(b, a) = s;
    }
  const Vector eig = singular_values(gram);
  const double lam_max = eig.front();
  const double lam_min = std::max(0.0, eig.back() - 1e-12 * lam_max);
  sigma_min_ = std::sqrt(lam_min);
  if (!(sigma_min_ > 1e-8)) {
    throw NumericError("body: generator matrix is rank deficient (sigma_min = " +
                       std::to_string(sigma_min_) + ", n = " + std::to_string(n) +
                       ", N = " + std::to_string(N) + ")");
  }
  certified_inradius_ = sigma_min_ / std::sqrt(static_cast<double>(N)) * (1.0 - 1e-9);
  l1_program_ = make_l1_program(gamma_);
}

Vector RandomQuotientBody::inner_products(std::span<const double> u) const {
  if (u.size() != n()) throw UsageError("inner_products: dimension mismatch");
  Vector v(N());
  for (std::size_t j = 0; j < N(); ++j) v[j] = dot(column(j), u);
  return v;
}

RandomQuotientBody make_body(std::size_t n, std::size_t N, const SeedSpec& seed) {
  if (n == 0 || N < n) {
    throw UsageError("make_body: need 1 <= n <= N, got n=" + std::to_string(n) +
                     " N=" + std::to_string(N));
  }
  return RandomQuotientBody(gaussian_matrix(n, N, 1.0 / static_cast<double>(n), seed), seed);
}

GaugeResult body_norm_certified(const RandomQuotientBody& body, std::span<const double> x) {
  if (x.size() != body.n()) throw UsageError("body_norm: dimension mismatch");
  if (!all_finite(x)) throw NumericError("body_norm: non-finite vector");
  const std::size_t N = body.N();
  GaugeResult out;
  out.representation.assign(N, 0.0);
  out.dual_point.assign(body.n(), 0.0);
  if (norm_inf(x) == 0.0) return out;

  const LPSolution sol = body.l1_program().solve(x);
  if (sol.status == LPStatus::infeasible) throw NotInSpan("body_norm: vector outside span of Γ");
  if (sol.status != LPStatus::optimal) throw NumericError("body_norm: LP " + to_string(sol.status));
  out.value = *sol.objective_value;
  const Vector& t = *sol.point;
  for (std::size_t j = 0; j < N; ++j) out.representation[j] = t[j] - t[N + j];
  out.dual_point = *sol.dual_point;
  return out;
}

double body_norm(const RandomQuotientBody& body, std::span<const double> x) {
  return body_norm_certified(body, x).value;
}

double dual_norm(const RandomQuotientBody& body, std::span<const double> u) {
  if (u.size() != body.n()) throw UsageError("dual_norm: dimension mismatch");
  double h = 0.0;
  for (std::size_t j = 0; j < body.N(); ++j) h = std::max(h, std::abs(dot(body.column(j), u)));
  return h;
}

MaxGauge max_body_norm(const RandomQuotientBody& body, const std::vector<Vector>& vectors,
                       std::span<const double> upper_bounds) {
  MaxGauge out;
  if (vectors.empty()) return out;
  if (!upper_bounds.empty() && upper_bounds.size() != vectors.size()) {
    throw UsageError("max_body_norm: bound count mismatch");
  }
  const double rc = body.certified_inradius();
  Vector ub(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    ub[i] = norm2(vectors[i]) / rc;
    if (!upper_bounds.empty()) ub[i] = std::min(ub[i], upper_bounds[i]);
  }
  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ub[a] > ub[b]; });
  double best = -1.0;
  for (std::size_t idx : order) {
    if (ub[idx] <= best) break;
    const double v = body_norm(body, vectors[idx]);
    ++out.lp_solves;
    if (v > best || (v == best && idx < out.argmax)) {
      best = v;
      out.argmax = idx;
    }
  }
  out.value = std::max(best, 0.0);
  return out;
}

MaxGauge operator_norm_detail(const RandomQuotientBody& body, const Matrix& t) {
  if (t.rows() != body.n() || t.cols() != body.n()) {
    throw UsageError("operator_norm: operator must be n x n");
  }
  if (!t.all_finite()) throw NumericError("operator_norm: non-finite operator");
  std::vector<Vector> images(body.N());
  for (std::size_t j = 0; j < body.N(); ++j) images[j] = t * body.column(j);
  return max_body_norm(body, images);
}

double operator_norm(const RandomQuotientBody& body, const Matrix& t) {
  return operator_norm_detail(body, t).value;
}

RadiiEstimate radii(const RandomQuotientBody& body, const SeedSpec& seed,
                    const RadiiOptions& options) {
  const std::size_t n = body.n();
  RadiiEstimate out;
  out.circumradius = body.circumradius();
  if (n == 1) {
    out.inradius_certificate = Vector{1.0};
    out.inradius_estimate = dual_norm(body, out.inradius_certificate);
    out.exact = true;
    return out;
  }
  if (n == 2 && body.N() <= kPlanarExactLimit) {
    auto [h, u] = planar_inradius(body);
    out.inradius_estimate = h;
    out.inradius_certificate = std::move(u);
    out.exact = true;
    return out;
  }

  // Multi-start projected subgradient descent of u ↦ max_j |⟨g_j,u⟩| on the
  // sphere.
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  Vector best_u;
  Vector grad(n);
  for (std::size_t restart = 0; restart < options.restarts; ++restart) {
    Vector u = sphere_point(n, rng);
    double step = options.initial_step;
    for (std::size_t it = 0; it <= options.steps; ++it) {
      std::size_t arg = 0;
      double val = -1.0;
      double sgn = 1.0;
      for (std::size_t j = 0; j < body.N(); ++j) {
        const double p = dot(body.column(j), u);
        if (std::abs(p) > val) {
          val = std::abs(p);
          arg = j;
          sgn = p >= 0.0 ? 1.0 : -1.0;
        }
      }
      if (val < best) {
        best = val;
        best_u = u;
      }
      if (it == options.steps) break;
      const auto g = body.column(arg);
      const double along = sgn * dot(g, u);
      for (std::size_t i = 0; i < n; ++i) grad[i] = sgn * g[i] - along * u[i];
      const double gn = norm2(grad);
      if (gn == 0.0) break;
      axpy(-step * val / gn, grad, u);
      scale(u, 1.0 / norm2(u));
      step *= options.step_decay;
    }
  }
  out.inradius_certificate = best_u;
  out.inradius_estimate = dual_norm(body, best_u);
  return out;
}

MonteCarloEstimate mean_width(const RandomQuotientBody& body, std::size_t samples,
                              const SeedSpec& seed) {
  if (samples < 100) throw UsageError("mean_width: need at least 100 samples");
  Rng rng(seed);
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector u = sphere_point(body.n(), rng);
    const double h = dual_norm(body, u);
    sum += h;
    sumsq += h * h;
  }
  const double m = static_cast<double>(samples);
  const double mean = sum / m;
  const double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0));
  return {mean, std::sqrt(var / m)};
}

VolumeRatio volume_ratio(const RandomQuotientBody& body, std::size_t samples,
                         const SeedSpec& seed) {
  const std::size_t n = body.n();
  if (n > kVolumeDimensionCap) {
    throw UsageError("volume_ratio: dimension " + std::to_string(n) + " exceeds cap " +
                     std::to_string(kVolumeDimensionCap));
  }
  if (samples < 10000) throw UsageError("volume_ratio: need at least 1e4 samples");
  const double radius = body.circumradius();
  const double inner = body.certified_inradius();
  Rng rng(seed);
  // Dual points u with h_B(u) ≤ 1 seen so far; ⟨x,u⟩ > 1 + tol proves x ∉ B
  // without an LP.
  std::vector<Vector> separators;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector x = sphere_point(n, rng);
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    scale(x, r);
    if (r <= inner) {
      ++hits;
      continue;
    }
    bool outside = false;
    for (const auto& u : separators) {
      if (dot(x, u) > 1.0 + kMembershipTol) {
        outside = true;
        break;
      }
    }
    if (outside) continue;
    GaugeResult g = body_norm_certified(body, x);
    if (g.value <= 1.0 + kMembershipTol) {
      ++hits;
    } else {
      separators.push_back(std::move(g.dual_point));
    }
  }

  const double m = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / m;
  constexpr double z = 1.959963984540054;
  const double denom = 1.0 + z * z / m;
  const double centre = (p + z * z / (2.0 * m)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / m + z * z / (4.0 * m * m)) / denom;
  const double lo = std::max(0.0, centre - half);
  const double hi = std::min(1.0, centre + half);
  const double inv_n = 1.0 / static_cast<double>(n);
  VolumeRatio out;
  out.hits = hits;
  out.samples = samples;
  out.ratio_per_dim = radius * std::pow(p, inv_n);
  out.ci_low = radius * std::pow(lo, inv_n);
  out.ci_high = radius * std::pow(hi, inv_n);
  return out;
}

// Rows: Cᵀ Γ (s⁺ − s⁻) = 0 with C spanning G⊥, then Σ(s⁺ + s⁻) + slack = 1.
SectionSupport::SectionSupport(const RandomQuotientBody& body, const Matrix& basis)
    : body_(&body) {
  if (basis.rows() != body.n()) throw UsageError("section_support: dimension mismatch");
  require_orthonormal(basis);
  const std::size_t n = body.n();
  const std::size_t N = body.N();
  const Matrix comp = orthogonal_complement(basis);
  const std::size_t c = comp.cols();
  Matrix a(c + 1, 2 * N + 1);
  for (std::size_t r = 0; r < c; ++r) {
    for (std::size_t j = 0; j < N; ++j) {
      const auto g = body.column(j);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += comp(i, r) * g[i];
      a(r, j) = s;
      a(r, N + j) = -s;
    }
  }
  for (std::size_t j = 0; j < 2 * N + 1; ++j) a(c, j) = 1.0;
  rhs_.assign(c + 1, 0.0);
  rhs_[c] = 1.0;
  lp_ = std::make_shared<const LinearProgram>(a, Vector(2 * N + 1, 0.0));
}

std::pair<double, Vector> SectionSupport::maximize(std::span<const double> w) const {
  const std::size_t N = body_->N();
  const Vector p = body_->inner_products(w);
  Vector obj(2 * N + 1, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    obj[j] = -p[j];
    obj[N + j] = p[j];
  }
  const LPSolution sol = lp_->solve(rhs_, obj);
  if (sol.status != LPStatus::optimal) {
    throw NumericError("section support: LP " + to_string(sol.status));
  }
  const Vector& s = *sol.point;
  Vector t(N);
  for (std::size_t j = 0; j < N; ++j) t[j] = s[j] - s[N + j];
  return {-*sol.objective_value, body_->gamma() * t};
}

double section_support(const RandomQuotientBody& body, const Matrix& basis,
                       std::span<const double> w) {
  return SectionSupport(body, basis)(w);
}

SectionDistortion section_distortion(const RandomQuotientBody& body, const Matrix& basis,
                                     std::size_t samples, const SeedSpec& seed) {
  if (basis.rows() != body.n()) {
    throw UsageError("section_distortion: subspace ambient dimension must equal n");
  }
  require_orthonormal(basis);
  const std::size_t h = basis.cols();
  if (h == 0) throw UsageError("section_distortion: empty subspace");
  SectionDistortion out;
  if (h == 1) {
    const Vector v = basis.column(0);
    out.max_gauge = out.min_gauge = body_norm(body, v);
    return out;
  }
  if (samples == 0) throw UsageError("section_distortion: need at least one sample");

  Rng rng(seed);
  struct Sample {
    double gauge;
    Vector x;
  };
  std::vector<Sample> pts;
  pts.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector c = sphere_point(h, rng);
    Vector x = basis * c;
    scale(x, 1.0 / norm2(x));
    const double g = body_norm(body, x);
    pts.push_back({g, std::move(x)});
  }
  auto by_gauge = [](const Sample& a, const Sample& b) { return a.gauge < b.gauge; };
  out.min_gauge = std::min_element(pts.begin(), pts.end(), by_gauge)->gauge;
  out.max_gauge = std::max_element(pts.begin(), pts.end(), by_gauge)->gauge;

  constexpr std::size_t kStarts = 3;
  constexpr std::size_t kSteps = 12;
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);

  // Ascent: with u the LP dual point at x, z = P_G u satisfies
  // ‖z/‖z‖‖_B ≥ ‖z‖₂ ≥ ‖x‖_B, so the gauge never decreases.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].gauge > pts[b].gauge; });
  for (std::size_t s = 0; s < std::min(kStarts, order.size()); ++s) {
    Vector x = pts[order[s]].x;
    double g = pts[order[s]].gauge;
    for (std::size_t step = 0; step < kSteps; ++step) {
      const GaugeResult cert = body_norm_certified(body, x);
      Vector z = orth_project(basis, cert.dual_point);
      const double zn = norm2(z);
      if (zn == 0.0) break;
      scale(z, 1.0 / zn);
      const double gz = body_norm(body, z);
      if (!(gz > g * (1.0 + 1e-12))) break;
      g = gz;
      x = std::move(z);
    }
    out.max_gauge = std::max(out.max_gauge, g);
  }

  // Descent: z maximizing ⟨x, ·⟩ over B ∩ G has ‖z‖₂ ≥ 1/‖x‖_B, so
  // z/‖z‖ has gauge at most ‖x‖_B.
  const SectionSupport oracle(body, basis);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].gauge < pts[b].gauge; });
  for (std::size_t s = 0; s < std::min(kStarts, order.size()); ++s) {
    Vector x = pts[order[s]].x;
    double g = pts[order[s]].gauge;
    for (std::size_t step = 0; step < kSteps; ++step) {
      Vector z = oracle.maximize(x).second;
      const double zn = norm2(z);
      if (zn == 0.0) break;
      scale(z, 1.0 / zn);
      const double gz = body_norm(body, z);
      if (!(gz < g * (1.0 - 1e-12))) break;
      g = gz;
      x = std::move(z);
    }
    out.min_gauge = std::min(out.min_gauge, g);
  }
  return out;
}

void write_body(std::ostream& os, const RandomQuotientBody& body) {
  os << "GENQUOT-BODY v1 " << body.n() << ' ' << body.N() << ' ' << body.seed().master_seed
     << ' ' << body.seed().stream_index << '\n';
  write_matrix_text(os, body.gamma());
}

RandomQuotientBody read_body(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw UsageError("body file: missing header");
  std::istringstream hs(line);
  std::string magic, version;
  std::size_t n = 0, N = 0;
  SeedSpec seed;
  if (!(hs >> magic >> version >> n >> N >> seed.master_seed >> seed.stream_index) ||
      magic != "GENQUOT-BODY" || version != "v1") {
    throw UsageError("body file: bad header '" + line + "'");
  }
  Matrix gamma = read_matrix_text(is);
  if (gamma.rows() != n || gamma.cols() != N) {
    throw UsageError("body file: header dimensions disagree with matrix");
  }
  return RandomQuotientBody(std::move(gamma), seed);
}

void save_body(const std::string& path, const RandomQuotientBody& body) {
  std::ofstream os(path);
  if (!os) throw IoError(path, "cannot open for writing");
  write_body(os, body);
  if (!os) throw IoError(path, "write failed");
}

RandomQuotientBody load_body(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path, "cannot open for reading");
  return read_body(is);
}

}  // namespace genquot
