#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genquot/body.hpp"
#include "genquot/matrix.hpp"
#include "genquot/random.hpp"

namespace genquot {

/// How a bracket side was obtained, from strongest to weakest.
enum class BoundKind { exact, sandwich, sampled };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& text);

/// Enclosure of the k-th Gelfand number of T on X_n (or of the Kolmogorov
/// number in dual mode). lower is certified; an upper side tagged `sampled`
/// is an estimate, not a bound.
struct SNumberBracket {
  std::size_t k = 1;
  double lower = 0.0;
  double upper = 0.0;
  BoundKind lower_kind = BoundKind::sandwich;
  BoundKind upper_kind = BoundKind::sandwich;
};

/// Singular values of T, non-increasing, of length min(rows, cols).
Vector euclidean_s_numbers(const Matrix& t);

struct BracketOptions {
  /// Random directions per restriction subspace, besides the leading
  /// singular direction.
  std::size_t samples = 32;
  SeedSpec seed{};
};

/// Brackets for k = 1..k_max (k_max = 0 means n). Entries are
/// non-increasing in k on both sides.
std::vector<SNumberBracket> gelfand_brackets(const RandomQuotientBody& body, const Matrix& t,
                                             bool dual, std::size_t k_max = 0,
                                             const BracketOptions& options = {});

SNumberBracket gelfand_bracket(const RandomQuotientBody& body, const Matrix& t, std::size_t k,
                               bool dual = false, const BracketOptions& options = {});

struct ShiftSearchResult {
  double best_shift = 0.0;
  double best_proxy = 0.0;  // s_k(T − best_shift·Id)
  SNumberBracket bracket_at_best;
  std::vector<std::pair<double, double>> grid;  // (λ, s_k(T − λ·Id))
  double window = 0.0;                          // search range is [−window, window]
};

/// Searches λ minimizing the Euclidean proxy s_k(T − λ·Id) over
/// [−2‖T‖_X, 2‖T‖_X] (grid, the anchors tr T/n and T_ii, then golden-section
/// refinement around the best point), and brackets c_k(T − λ*·Id).
ShiftSearchResult min_over_shifts(const RandomQuotientBody& body, const Matrix& t, std::size_t k,
                                  std::size_t grid_points = 201,
                                  const BracketOptions& options = {});

struct GelfandSumResult {
  double traceless_shift = 0.0;  // tr T / n
  double best_shift = 0.0;       // minimizer of Σ s_i(T − λ·Id)
  double proxy = 0.0;            // Σ s_i(T − best_shift·Id)
  double lower = 0.0;
  double upper = 0.0;
  BoundKind lower_kind = BoundKind::sandwich;
  BoundKind upper_kind = BoundKind::sandwich;
};

/// Bracket for inf_λ Σ_i c_i(T − λ·Id), with λ chosen on the (convex)
/// Euclidean proxy Σ s_i(T − λ·Id).
GelfandSumResult gelfand_sum_bracket(const RandomQuotientBody& body, const Matrix& t,
                                     std::size_t grid_points = 201,
                                     const BracketOptions& options = {});

struct MnWitness {
  Matrix subspace_basis;  // n × alpha, orthonormal columns
  std::size_t alpha = 0;
  double beta = 0.0;
  double achieved = 0.0;  // σ_min((Id − FFᵀ)·T·F)
  bool member() const { return achieved >= beta; }
};

/// Throws UsageError for a non-orthonormal basis.
MnWitness mn_witness_check(const Matrix& t, const Matrix& basis, double beta);

/// Candidate witnesses for the union over k ≤ n/2 of M_n(k, γ/k), built from
/// leading right singular subspaces of T and of its traceless part. Returns
/// the candidate with the largest γ = alpha·achieved, or nothing if every
/// candidate achieves 0 ("not established").
std::optional<MnWitness> best_mn_witness(const Matrix& t);

struct HsCheck {
  double hs = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// Frobenius norm of T/‖T‖_X against √N. Throws UsageError for T = 0.
HsCheck hs_of_normalized(const RandomQuotientBody& body, const Matrix& t);

}  // namespace genquot
