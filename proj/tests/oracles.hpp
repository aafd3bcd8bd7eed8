#pragma once

// Independent reference computations used only by tests. None of these call
// the library's LP solver, SVD or gauge routines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "genquot/matrix.hpp"

namespace oracle {

using genquot::Matrix;
using genquot::Vector;

/// Solves a small dense system by Gaussian elimination with partial
/// pivoting; nothing when singular.
inline std::optional<Vector> solve_dense(Matrix a, Vector b) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (std::abs(a(piv, c)) < 1e-12) return std::nullopt;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

/// min cᵀx s.t. Ax = b, x ≥ 0 by enumerating every basic solution. Requires
/// A of full row rank and a bounded problem; nothing when infeasible.
inline std::optional<double> lp_by_enumeration(const Matrix& a, const Vector& b,
                                               const Vector& c) {
  const std::size_t m = a.rows();
  const std::size_t v = a.cols();
  std::optional<double> best;
  std::vector<bool> pick(v, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  do {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < v; ++j)
      if (pick[j]) cols.push_back(j);
    Matrix basis(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) basis(i, k) = a(i, cols[k]);
    const auto xb = solve_dense(basis, b);
    if (!xb) continue;
    if (std::any_of(xb->begin(), xb->end(), [](double x) { return x < -1e-10; })) continue;
    double obj = 0.0;
    for (std::size_t k = 0; k < m; ++k) obj += c[cols[k]] * (*xb)[k];
    if (!best || obj < *best) best = obj;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

/// Planar gauge of absconv{±g_j} from the vertices of the polar polygon:
/// u with ⟨g_i,u⟩ = ±1, ⟨g_j,u⟩ = ±1 and max_l |⟨g_l,u⟩| ≤ 1.
class PlanarGauge {
 public:
  explicit PlanarGauge(const Matrix& gamma) : gamma_(gamma) {
    const std::size_t N = gamma.cols();
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j)
        for (double si : {-1.0, 1.0})
          for (double sj : {-1.0, 1.0}) {
            const double a = gamma(0, i), b = gamma(1, i), c = gamma(0, j), d = gamma(1, j);
            const double det = a * d - b * c;
            if (std::abs(det) < 1e-14) continue;
            const Vector u{(si * d - sj * b) / det, (sj * a - si * c) / det};
            bool ok = true;
            for (std::size_t l = 0; l < N && ok; ++l)
              ok = std::abs(gamma(0, l) * u[0] + gamma(1, l) * u[1]) <= 1.0 + 1e-12;
            if (ok) polar_.push_back(u);
          }
  }

  double operator()(const Vector& x) const {
    double best = 0.0;
    for (const auto& u : polar_) best = std::max(best, x[0] * u[0] + x[1] * u[1]);
    return best;
  }

 private:
  Matrix gamma_;
  std::vector<Vector> polar_;
};

/// sup over a uniform angular net of ‖Tx‖/‖x‖ for a planar norm.
template <class Norm>
double planar_operator_norm_by_net(const Matrix& t, const Norm& norm, std::size_t points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double th = std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
    const Vector x{std::cos(th), std::sin(th)};
    const Vector y{t(0, 0) * x[0] + t(0, 1) * x[1], t(1, 0) * x[0] + t(1, 1) * x[1]};
    best = std::max(best, norm(y) / norm(x));
  }
  return best;
}

/// Quasi-uniform points on S² (Fibonacci lattice).
inline std::vector<Vector> sphere_net(std::size_t points) {
  std::vector<Vector> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < points; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(points);
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * static_cast<double>(i);
    out.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return out;
}

inline Vector apply3(const Matrix& t, const Vector& x) {
  Vector y(3, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) y[i] += t(i, j) * x[j];
  return y;
}

inline double len(const Vector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Euclidean Gelfand numbers of a 3×3 operator by searching subspaces of
/// codimension k−1 over a sphere net: k = 1 is the whole space, k = 2 the
/// planes w⊥, k = 3 the lines.
inline double gelfand_by_net_3d(const Matrix& t, std::size_t k, std::size_t points) {
  const auto net = sphere_net(points);
  if (k == 1 || k == 3) {
    double best = k == 1 ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& x : net) {
      const double v = len(apply3(t, x));
      best = k == 1 ? std::max(best, v) : std::min(best, v);
    }
    return best;
  }
  // ‖T|w⊥‖ = max over unit x ⊥ w, parametrized on a circle in w⊥.
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : net) {
    Vector a = std::abs(w[0]) < 0.9 ? Vector{1, 0, 0} : Vector{0, 1, 0};
    const double p = a[0] * w[0] + a[1] * w[1] + a[2] * w[2];
    for (int i = 0; i < 3; ++i) a[i] -= p * w[i];
    const double la = len(a);
    for (auto& v : a) v /= la;
    const Vector b{w[1] * a[2] - w[2] * a[1], w[2] * a[0] - w[0] * a[2], w[0] * a[1] - w[1] * a[0]};
    double sup = 0.0;
    constexpr int kCircle = 180;
    for (int s = 0; s < kCircle; ++s) {
      const double th = std::numbers::pi * s / kCircle;
      Vector x(3);
      for (int i = 0; i < 3; ++i) x[i] = std::cos(th) * a[i] + std::sin(th) * b[i];
      sup = std::max(sup, len(apply3(t, x)));
    }
    best = std::min(best, sup);
  }
  return best;
}

/// Ordinary least squares y = α + βx with the textbook slope standard error.
struct Ols {
  double slope;
  double intercept;
  double slope_se;
};

inline Ols ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  Ols o{};
  o.slope = (n * sxy - sx * sy) / den;
  o.intercept = (sy - o.slope * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - o.intercept - o.slope * x[i];
    rss += r * r;
  }
  o.slope_se = std::sqrt(rss / (n - 2) * n / den);
  return o;
}

}  // namespace oracle
