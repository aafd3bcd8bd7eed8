#include "genquot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "genquot/errors.hpp"

namespace genquot {
namespace {

constexpr int kMaxSweeps = 80;
constexpr double kJacobiTol = 1e-15;

// Columns of `m` (or of mᵀ when `transposed`) as contiguous vectors.
std::vector<Vector> columns_of(const Matrix& m, bool transposed) {
  const std::size_t count = transposed ? m.rows() : m.cols();
  const std::size_t len = transposed ? m.cols() : m.rows();
  std::vector<Vector> cols(count, Vector(len));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (transposed)
        cols[i][j] = m(i, j);
      else
        cols[j][i] = m(i, j);
    }
  return cols;
}

void rotate(Vector& a, Vector& b, double c, double s) noexcept {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    a[i] = c * x - s * y;
    b[i] = s * x + c * y;
  }
}

// Hestenes one-sided Jacobi: orthogonalizes the columns of `w` in place and
// accumulates the rotations into `v` when it is non-null.
void jacobi_orthogonalize(std::vector<Vector>& w, std::vector<Vector>* v) {
  const std::size_t n = w.size();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(w[p], w[p]);
        const double beta = dot(w[q], w[q]);
        const double gamma = dot(w[p], w[q]);
        if (gamma == 0.0 || std::abs(gamma) <= kJacobiTol * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(w[p], w[q], c, s);
        if (v) rotate((*v)[p], (*v)[q], c, s);
      }
    }
    if (!rotated) return;
  }
  throw NumericError("one-sided Jacobi SVD did not converge");
}

// Appends unit vectors to `basis` (vectors of length d) until it has `target`
// orthonormal members, choosing the coordinate axis with the largest residual.
void complete_basis(std::vector<Vector>& basis, std::size_t d, std::size_t target) {
  while (basis.size() < target) {
    Vector best;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < d; ++i) {
      Vector e(d, 0.0);
      e[i] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) axpy(-dot(q, e), q, e);
      const double nrm = norm2(e);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = std::move(e);
      }
    }
    if (best_norm <= 1e-8) throw NumericError("basis completion failed");
    scale(best, 1.0 / best_norm);
    basis.push_back(std::move(best));
  }
}

}  // namespace

SvdResult svd(const Matrix& m) {
  if (!m.all_finite()) throw NumericError("svd: non-finite input");
  const bool transposed = m.rows() < m.cols();
  // Work on the tall orientation: columns are the short side.
  std::vector<Vector> w = columns_of(m, transposed);
  const std::size_t p = w.size();
  const std::size_t len = p ? w.front().size() : 0;
  std::vector<Vector> v(p, Vector(p, 0.0));
  for (std::size_t i = 0; i < p; ++i) v[i][i] = 1.0;
  jacobi_orthogonalize(w, &v);

  std::vector<double> sigma(p);
  for (std::size_t j = 0; j < p; ++j) sigma[j] = norm2(w[j]);
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  const double smax = p ? sigma[order.front()] : 0.0;
  std::vector<Vector> left;
  std::vector<Vector> right;
  Vector values;
  left.reserve(p);
  for (std::size_t idx : order) {
    values.push_back(sigma[idx]);
    right.push_back(v[idx]);
  }
  // Columns with negligible norm carry no direction; their left vectors are
  // completed to an orthonormal set afterwards.
  std::size_t rank = 0;
  for (std::size_t k = 0; k < p; ++k) {
    const double s = values[k];
    if (s == 0.0 || s <= 1e-14 * smax) break;
    Vector u = w[order[k]];
    scale(u, 1.0 / s);
    left.push_back(std::move(u));
    ++rank;
  }
  for (std::size_t k = rank; k < p; ++k) values[k] = std::max(values[k], 0.0);
  complete_basis(left, len, p);

  // In the transposed case the roles of the two bases swap.
  Matrix big = Matrix::from_columns(left);
  Matrix small = Matrix::from_columns(right);
  if (p == 0) return {};
  if (transposed) return {std::move(small), std::move(values), std::move(big)};
  return {std::move(big), std::move(values), std::move(small)};
}

Vector singular_values(const Matrix& m) {
  if (!m.all_finite()) throw NumericError("singular_values: non-finite input");
  std::vector<Vector> w = columns_of(m, m.rows() < m.cols());
  jacobi_orthogonalize(w, nullptr);
  Vector s(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) s[j] = norm2(w[j]);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

OrthonormalizeResult orthonormalize(const std::vector<Vector>& vectors, double tol) {
  if (vectors.empty()) throw UsageError("orthonormalize: empty input");
  const std::size_t d = vectors.front().size();
  double max_norm = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != d) throw UsageError("orthonormalize: vectors of unequal length");
    if (!all_finite(v)) throw NumericError("orthonormalize: non-finite input");
    max_norm = std::max(max_norm, norm2(v));
  }
  std::vector<Vector> basis;
  std::size_t dropped = 0;
  for (const auto& v : vectors) {
    Vector w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) axpy(-dot(q, w), q, w);
    const double nrm = norm2(w);
    if (max_norm == 0.0 || nrm < tol * max_norm) {
      ++dropped;
      continue;
    }
    scale(w, 1.0 / nrm);
    basis.push_back(std::move(w));
  }
  OrthonormalizeResult out;
  out.dropped = dropped;
  out.basis = basis.empty() ? Matrix(d, 0) : Matrix::from_columns(basis);
  return out;
}

OrthonormalizeResult orthonormalize_columns(const Matrix& m, double tol) {
  return orthonormalize(columns_of(m, false), tol);
}

double orthonormality_defect(const Matrix& basis) {
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.cols(); ++a)
    for (std::size_t b = a; b < basis.cols(); ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < basis.rows(); ++i) s += basis(i, a) * basis(i, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

void require_orthonormal(const Matrix& basis, double tol) {
  const double defect = orthonormality_defect(basis);
  if (!(defect <= tol)) {
    throw UsageError("basis is not orthonormal (defect " + std::to_string(defect) + ")");
  }
}

Vector orth_project(const Matrix& basis, std::span<const double> x) {
  if (basis.rows() != x.size()) throw UsageError("orth_project: dimension mismatch");
  require_orthonormal(basis);
  const Vector coeff = multiply_transposed(basis, x);
  return basis * coeff;
}

Matrix projection_matrix(const Matrix& basis) {
  Matrix p(basis.rows(), basis.rows());
  for (std::size_t i = 0; i < basis.rows(); ++i)
    for (std::size_t j = 0; j < basis.rows(); ++j) p(i, j) = dot(basis.row(i), basis.row(j));
  return p;
}

Matrix orthogonal_complement(const Matrix& basis) {
  const std::size_t d = basis.rows();
  std::vector<Vector> all = columns_of(basis, false);
  const std::size_t r = all.size();
  complete_basis(all, d, d);
  if (r == d) return Matrix(d, 0);
  std::vector<Vector> rest(all.begin() + static_cast<std::ptrdiff_t>(r), all.end());
  return Matrix::from_columns(rest);
}

}  // namespace genquot
