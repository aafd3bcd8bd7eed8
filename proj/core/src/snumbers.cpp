#include "genquot/snumbers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"
#include "genquot/parallel.hpp"

namespace genquot {
namespace {

constexpr double kInvGolden = 0.6180339887498949;

BoundKind weaker(BoundKind a, BoundKind b) { return std::max(a, b); }

void require_square(const RandomQuotientBody& body, const Matrix& t, const char* who) {
  if (t.rows() != body.n() || t.cols() != body.n()) {
    throw UsageError(std::string(who) + ": operator must be n x n");
  }
  if (!t.all_finite()) throw NumericError(std::string(who) + ": non-finite operator");
}

Matrix shifted(const Matrix& t, double lambda) {
  Matrix out = t;
  for (std::size_t i = 0; i < t.rows(); ++i) out(i, i) -= lambda;
  return out;
}

double proxy_sk(const Matrix& t, double lambda, std::size_t k) {
  return singular_values(shifted(t, lambda))[k - 1];
}

double proxy_sum(const Matrix& t, double lambda) {
  const Vector s = singular_values(shifted(t, lambda));
  double sum = 0.0;
  for (double v : s) sum += v;
  return sum;
}

// Norm on the domain/codomain: the gauge of B, or its dual h_B.
double space_norm(const RandomQuotientBody& body, std::span<const double> x, bool dual) {
  return dual ? dual_norm(body, x) : body_norm(body, x);
}

struct Minimum {
  double lambda;
  double value;
};

bool better(const Minimum& a, const Minimum& b) {
  return a.value < b.value || (a.value == b.value && a.lambda < b.lambda);
}

// Grid over [−w, w] plus anchors, then golden-section refinement on the
// bracket around the best grid point.
template <class F>
Minimum search_shift(F&& f, double w, std::size_t grid_points,
                     const std::vector<double>& anchors,
                     std::vector<std::pair<double, double>>* grid_out) {
  const std::size_t g = std::max<std::size_t>(grid_points, 3) | 1;  // odd, so 0 is a node
  const double h = 2.0 * w / static_cast<double>(g - 1);
  std::vector<double> lambdas(g);
  for (std::size_t i = 0; i < g; ++i) {
    lambdas[i] = i == (g - 1) / 2 ? 0.0 : -w + h * static_cast<double>(i);
  }
  const std::vector<double> values =
      parallel_map<double>(g, [&](std::size_t i) { return f(lambdas[i]); });
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < g; ++i)
    if (values[i] < values[best_i]) best_i = i;
  if (grid_out != nullptr) {
    grid_out->clear();
    for (std::size_t i = 0; i < g; ++i) grid_out->emplace_back(lambdas[i], values[i]);
  }
  Minimum best{lambdas[best_i], values[best_i]};

  double a = lambdas[best_i > 0 ? best_i - 1 : 0];
  double b = lambdas[std::min(best_i + 1, g - 1)];
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  const double tol = 1e-13 * std::max(1.0, w);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvGolden * (b - a);
      f2 = f(x2);
    }
  }
  const Minimum refined{x1, f1};
  if (better(refined, best)) best = refined;
  for (double lam : anchors) {
    if (!(std::abs(lam) <= w)) continue;
    const Minimum cand{lam, f(lam)};
    if (better(cand, best)) best = cand;
  }
  return best;
}

std::vector<double> shift_anchors(const Matrix& t) {
  std::vector<double> out;
  out.push_back(t.trace() / static_cast<double>(t.rows()));
  for (std::size_t i = 0; i < t.rows(); ++i) out.push_back(t(i, i));
  return out;
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::exact:
      return "exact";
    case BoundKind::sandwich:
      return "sandwich";
    case BoundKind::sampled:
      return "sampled";
  }
  return "unknown";
}

BoundKind bound_kind_from_string(const std::string& text) {
  if (text == "exact") return BoundKind::exact;
  if (text == "sandwich") return BoundKind::sandwich;
  if (text == "sampled") return BoundKind::sampled;
  throw UsageError("unknown bound kind '" + text + "'");
}

Vector euclidean_s_numbers(const Matrix& t) {
  if (!t.all_finite()) throw NumericError("euclidean_s_numbers: non-finite operator");
  return singular_values(t);
}

std::vector<SNumberBracket> gelfand_brackets(const RandomQuotientBody& body, const Matrix& t,
                                             bool dual, std::size_t k_max,
                                             const BracketOptions& options) {
  require_square(body, t, "gelfand_bracket");
  const std::size_t n = body.n();
  if (k_max == 0) k_max = n;
  if (k_max > n) throw UsageError("gelfand_bracket: need 1 <= k <= n");

  const Matrix op = dual ? t.transpose() : t;
  const SvdResult dec = svd(op);
  const Vector& s = dec.singular_values;
  // ‖x‖₂/R ≤ ‖x‖_B ≤ ‖x‖₂/r and r‖u‖₂ ≤ h_B(u) ≤ R‖u‖₂ give the same
  // distortion factor R/r in both modes.
  const double factor = body.circumradius() / body.certified_inradius();
  // ‖Tᵀ : X* → X*‖ = ‖T : X → X‖, so one LP-based norm serves both modes.
  const double q = operator_norm(body, t);

  std::vector<SNumberBracket> out(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    SNumberBracket& b = out[k - 1];
    b.k = k;
    if (k == 1) {
      b.lower = b.upper = q;
      b.lower_kind = b.upper_kind = BoundKind::exact;
      continue;
    }
    b.lower = s[k - 1] / factor;
    b.lower_kind = BoundKind::sandwich;
    const double sandwich = s[k - 1] * factor;
    if (sandwich <= q) {
      b.upper = sandwich;
      b.upper_kind = BoundKind::sandwich;
    } else {
      b.upper = q;
      b.upper_kind = BoundKind::exact;
    }
  }
  if (k_max < 2 || q == 0.0) return out;

  // Restriction of T to Z_k = span{v_k, …, v_n}: the sup over sampled unit
  // directions of ‖Tx‖/‖x‖ estimates ‖T|Z_k‖ ≥ c_k from below, so it is
  // recorded as a sampled upper estimate.
  std::vector<double> sampled(k_max + 1, std::numeric_limits<double>::infinity());
  parallel_for(k_max - 1, [&](std::size_t idx) {
    const std::size_t k = idx + 2;
    Rng rng(options.seed.derive(k));
    const std::size_t zdim = n - (k - 1);
    double best = 0.0;
    for (std::size_t s_i = 0; s_i <= options.samples; ++s_i) {
      Vector x(n, 0.0);
      if (s_i == 0) {
        x = dec.right_basis.column(k - 1);
      } else {
        for (std::size_t c = 0; c < zdim; ++c) {
          const double w = rng.normal();
          for (std::size_t i = 0; i < n; ++i) x[i] += w * dec.right_basis(i, k - 1 + c);
        }
      }
      const double xn = space_norm(body, x, dual);
      if (xn == 0.0) continue;
      best = std::max(best, space_norm(body, op * x, dual) / xn);
    }
    sampled[k] = best;
  });

  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= k_max; ++k) {
    SNumberBracket& b = out[k - 1];
    running = std::min(running, std::max(sampled[k], b.lower));
    if (running < b.upper) {
      b.upper = running;
      b.upper_kind = BoundKind::sampled;
    }
  }
  return out;
}

SNumberBracket gelfand_bracket(const RandomQuotientBody& body, const Matrix& t, std::size_t k,
                               bool dual, const BracketOptions& options) {
  if (k == 0 || k > body.n()) throw UsageError("gelfand_bracket: need 1 <= k <= n");
  return gelfand_brackets(body, t, dual, k, options).back();
}

ShiftSearchResult min_over_shifts(const RandomQuotientBody& body, const Matrix& t, std::size_t k,
                                  std::size_t grid_points, const BracketOptions& options) {
  require_square(body, t, "min_over_shifts");
  if (k == 0 || k > body.n()) throw UsageError("min_over_shifts: need 1 <= k <= n");
  ShiftSearchResult out;
  const double q = operator_norm(body, t);
  out.window = 2.0 * q;
  if (q == 0.0) {
    out.grid.emplace_back(0.0, 0.0);
    out.bracket_at_best = gelfand_bracket(body, t, k, false, options);
    return out;
  }
  const Minimum best = search_shift([&](double lam) { return proxy_sk(t, lam, k); }, out.window,
                                    grid_points, shift_anchors(t), &out.grid);
  out.best_shift = best.lambda;
  out.best_proxy = best.value;
  out.bracket_at_best = gelfand_bracket(body, shifted(t, best.lambda), k, false, options);
  return out;
}

GelfandSumResult gelfand_sum_bracket(const RandomQuotientBody& body, const Matrix& t,
                                     std::size_t grid_points, const BracketOptions& options) {
  require_square(body, t, "gelfand_sum_bracket");
  const std::size_t n = body.n();
  GelfandSumResult out;
  out.traceless_shift = t.trace() / static_cast<double>(n);
  const double q = operator_norm(body, t);
  if (q > 0.0) {
    const Minimum best = search_shift([&](double lam) { return proxy_sum(t, lam); }, 2.0 * q,
                                      grid_points, shift_anchors(t), nullptr);
    out.best_shift = best.lambda;
    out.proxy = best.value;
  }
  const auto brackets = gelfand_brackets(body, shifted(t, out.best_shift), false, 0, options);
  out.lower_kind = out.upper_kind = BoundKind::exact;
  for (const auto& b : brackets) {
    out.lower += b.lower;
    out.upper += b.upper;
    out.lower_kind = weaker(out.lower_kind, b.lower_kind);
    out.upper_kind = weaker(out.upper_kind, b.upper_kind);
  }
  return out;
}

MnWitness mn_witness_check(const Matrix& t, const Matrix& basis, double beta) {
  if (t.rows() != t.cols() || basis.rows() != t.rows()) {
    throw UsageError("mn_witness_check: dimension mismatch");
  }
  require_orthonormal(basis);
  MnWitness w;
  w.subspace_basis = basis;
  w.alpha = basis.cols();
  w.beta = beta;
  if (w.alpha == 0) return w;
  Matrix image = t * basis;
  const Matrix proj = projection_matrix(basis);
  image -= proj * image;
  w.achieved = singular_values(image).back();
  if (image.rows() < image.cols()) w.achieved = 0.0;
  return w;
}

std::optional<MnWitness> best_mn_witness(const Matrix& t) {
  const std::size_t n = t.rows();
  if (n != t.cols()) throw UsageError("best_mn_witness: operator must be square");
  std::optional<MnWitness> best;
  const Matrix traceless = shifted(t, t.trace() / static_cast<double>(n));
  for (const Matrix* op : {&t, &traceless}) {
    const SvdResult dec = svd(*op);
    for (std::size_t k = 1; k <= n / 2; ++k) {
      Matrix f(n, k);
      for (std::size_t c = 0; c < k; ++c) f.set_column(c, dec.right_basis.column(c));
      MnWitness w = mn_witness_check(t, f, 0.0);
      w.beta = w.achieved;
      if (w.achieved <= 0.0) continue;
      const double gamma = static_cast<double>(k) * w.achieved;
      if (!best || gamma > static_cast<double>(best->alpha) * best->achieved) best = std::move(w);
    }
  }
  return best;
}

HsCheck hs_of_normalized(const RandomQuotientBody& body, const Matrix& t) {
  require_square(body, t, "hs_of_normalized");
  const double q = operator_norm(body, t);
  if (q == 0.0) throw UsageError("hs_of_normalized: operator is zero");
  HsCheck out;
  out.hs = t.frobenius_norm() / q;
  out.bound = std::sqrt(static_cast<double>(body.N()));
  out.ok = out.hs <= out.bound + 1e-6;
  return out;
}

}  // namespace genquot
