#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"
#include "genquot/matrix.hpp"
#include "genquot/random.hpp"

using namespace genquot;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

Matrix reconstruct(const SvdResult& r) {
  Matrix us = r.left_basis;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= r.singular_values[j];
  return us * r.right_basis.transpose();
}

}  // namespace

TEST(Svd, DiagonalIsSorted) {
  const double d[] = {3.0, 1.0, 2.0};
  const Vector s = singular_values(Matrix::diagonal(d));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0], 3.0, 1e-14);
  EXPECT_NEAR(s[1], 2.0, 1e-14);
  EXPECT_NEAR(s[2], 1.0, 1e-14);
}

TEST(Svd, ZeroMatrix) {
  const Vector s = singular_values(Matrix(3, 3));
  for (double v : s) EXPECT_EQ(v, 0.0);
}

TEST(Svd, RandomReconstruction) {
  const Matrix m = gaussian_matrix(5, 5, 1.0, {1, 0});
  EXPECT_LE(max_abs_diff(reconstruct(svd(m)), m), 1e-10);
}

TEST(Svd, RejectsNonFinite) {
  Matrix m(2, 2);
  m(0, 1) = std::nan("");
  EXPECT_THROW(svd(m), NumericError);
}

TEST(SvdProperty, ReconstructionTransposeAndFrobenius) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t r = 1 + s % 7;
    const std::size_t c = 1 + (s * 3) % 9;
    const Matrix m = gaussian_matrix(r, c, 1.0 + static_cast<double>(s), {11, s});
    const SvdResult res = svd(m);
    EXPECT_LE(max_abs_diff(reconstruct(res), m), 1e-10 * (1.0 + m.frobenius_norm()));
    EXPECT_LE(orthonormality_defect(res.left_basis), 1e-10);
    EXPECT_LE(orthonormality_defect(res.right_basis), 1e-10);
    EXPECT_TRUE(std::is_sorted(res.singular_values.rbegin(), res.singular_values.rend()));

    const Vector st = singular_values(m.transpose());
    ASSERT_EQ(st.size(), res.singular_values.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < st.size(); ++i) {
      EXPECT_NEAR(st[i], res.singular_values[i], 1e-10);
      sq += res.singular_values[i] * res.singular_values[i];
    }
    EXPECT_NEAR(std::sqrt(sq), m.frobenius_norm(), 1e-9);
  }
}

TEST(Orthonormalize, TwoVectors) {
  const auto r = orthonormalize({{1, 0}, {1, 1}});
  ASSERT_EQ(r.basis.cols(), 2u);
  EXPECT_EQ(r.dropped, 0u);
  EXPECT_NEAR(r.basis(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(r.basis(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(r.basis(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(r.basis(1, 1), 1.0, 1e-15);
}

TEST(Orthonormalize, DropsDependent) {
  const auto r = orthonormalize({{1, 0}, {2, 0}}, 1e-10);
  EXPECT_EQ(r.basis.cols(), 1u);
  EXPECT_EQ(r.dropped, 1u);
}

TEST(Orthonormalize, RandomGramIsIdentity) {
  const auto r = orthonormalize_columns(gaussian_matrix(8, 8, 1.0, {2, 0}));
  ASSERT_EQ(r.basis.cols(), 8u);
  EXPECT_LE(orthonormality_defect(r.basis), 1e-12);
}

TEST(OrthProject, Coordinate) {
  const Matrix e1 = Matrix::from_columns({{1, 0}});
  const Vector p = orth_project(e1, Vector{3, 4});
  EXPECT_DOUBLE_EQ(p[0], 3.0);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
}

TEST(OrthProject, InSpanUnchanged) {
  const Matrix b = haar_subspace(6, 3, {3, 1}).basis;
  const Vector x = b * Vector{0.5, -1.0, 2.0};
  const Vector p = orth_project(b, x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(p[i], x[i], 1e-12);
}

TEST(OrthProject, IdempotentAndContracting) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix b = haar_subspace(7, 1 + s % 7, {3, s}).basis;
    Rng rng({3, 1000 + s});
    const Vector x = gaussian_vector(7, 1.0, rng);
    const Vector p1 = orth_project(b, x);
    const Vector p2 = orth_project(b, p1);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(p1[i], p2[i], 1e-12);
    EXPECT_LE(norm2(p1), norm2(x) + 1e-12);
  }
}

TEST(OrthogonalComplement, SpansRemainder) {
  const Matrix b = haar_subspace(6, 2, {4, 0}).basis;
  const Matrix c = orthogonal_complement(b);
  ASSERT_EQ(c.cols(), 4u);
  const Matrix cross = b.transpose() * c;
  for (double v : cross.data()) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_LE(orthonormality_defect(c), 1e-12);
}

TEST(RequireOrthonormal, Rejects) {
  EXPECT_THROW(require_orthonormal(Matrix::from_columns({{1, 1}})), UsageError);
}

TEST(MatrixText, RoundTripIsBitExact) {
  Matrix m = gaussian_matrix(4, 3, 1.0, {5, 5});
  m(0, 0) = 1e-300;
  m(1, 1) = -0.1;
  std::stringstream ss;
  write_matrix_text(ss, m);
  EXPECT_EQ(read_matrix_text(ss), m);
  EXPECT_EQ(from_matrix_text(to_matrix_text(m)), m);
}

TEST(MatrixText, MalformedThrows) {
  EXPECT_THROW(from_matrix_text("2 2\n1 2\n3"), Error);
}
