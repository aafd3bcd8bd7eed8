#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genquot/matrix.hpp"

namespace genquot {

/// Thin SVD M = U·diag(S)·Vᵀ with p = min(rows, cols) singular triplets.
struct SvdResult {
  Matrix left_basis;      // rows × p, orthonormal columns
  Vector singular_values; // length p, non-increasing
  Matrix right_basis;     // cols × p, orthonormal columns
};

/// One-sided Jacobi SVD. Throws NumericError on non-finite input.
SvdResult svd(const Matrix& m);

/// Singular values only; cheaper than svd() when the bases are not needed.
Vector singular_values(const Matrix& m);

struct OrthonormalizeResult {
  Matrix basis;             // d × r, orthonormal columns
  std::size_t dropped = 0;  // input vectors found dependent
};

inline constexpr double kDefaultDropTolerance = 1e-10;

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
/// residual falls below tol·(largest input norm) is dropped.
OrthonormalizeResult orthonormalize(const std::vector<Vector>& vectors,
                                    double tol = kDefaultDropTolerance);
OrthonormalizeResult orthonormalize_columns(const Matrix& m,
                                            double tol = kDefaultDropTolerance);

/// Largest |BᵀB − I| entry.
double orthonormality_defect(const Matrix& basis);

/// Throws UsageError unless BᵀB is within tol of the identity.
void require_orthonormal(const Matrix& basis, double tol = 1e-10);

/// B·Bᵀ·x for a basis with orthonormal columns.
Vector orth_project(const Matrix& basis, std::span<const double> x);

/// The n×n matrix B·Bᵀ.
Matrix projection_matrix(const Matrix& basis);

/// Orthonormal basis of the orthogonal complement of span(basis) in R^d.
Matrix orthogonal_complement(const Matrix& basis);

}  // namespace genquot
