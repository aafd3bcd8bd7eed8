#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "genquot/body.hpp"
#include "genquot/matrix.hpp"
#include "genquot/random.hpp"
#include "genquot/snumbers.hpp"

namespace genquot {

/// E = span{g_j : j ∈ A} with the measured constants of the map
/// u : ℓ1^k → E, e_i ↦ g_{A_i}.
struct L1Witness {
  std::vector<std::size_t> indices;  // A, sorted
  Matrix basis;                      // n × k, orthonormal basis of E
  double sigma_min = 0.0;            // of the block [g_j/‖g_j‖₂]_{j∈A}
  double max_leak = 0.0;             // max_{j∉A} ‖P_E g_j‖₂
  double u_norm = 0.0;               // ‖u‖ = max_{j∈A} ‖g_j‖_B
  double u_inverse_norm = 0.0;       // ‖u⁻¹ : E → ℓ1^k‖
  BoundKind u_inverse_kind = BoundKind::exact;
  double iso_constant = 0.0;    // ‖u‖·‖u⁻¹‖ ≥ d(ℓ1^k, E)
  double compl_constant = 0.0;  // ‖P_E : X_n → X_n‖
  std::size_t attempts = 0;
  SeedSpec seed{};  // stream that produced A
};

struct L2Witness {
  HaarSubspace subspace;
  double max_gauge = 0.0;
  double min_gauge = 0.0;
  double distortion = 1.0;         // max_gauge/min_gauge on sampled directions
  double compl_constant = 0.0;     // ‖P_G : X_n → X_n‖
  double proj_image_radius = 0.0;  // max_j ‖P_G g_j‖₂
  double radius_ratio = 0.0;       // proj_image_radius / √(h/n)
  bool relaxed = false;            // produced under N < n² with relaxation allowed
  SeedSpec seed{};
};

struct L1Options {
  /// 0 selects max(1, ⌊c_cal·min(√n, n/log N)⌋).
  std::size_t k = 0;
  double c_cal = 0.25;
  double el2_threshold = 0.25;
  std::size_t retries = 16;
  /// Largest k for which ‖u⁻¹‖ is computed exactly (2^{k−1} LPs).
  std::size_t exact_inverse_max_k = 10;
  std::size_t inverse_samples = 1000;
};

std::size_t auto_l1_dimension(std::size_t n, std::size_t N, double c_cal);

/// Draws random k-subsets A on consecutive streams starting at `seed` until
/// σ_min ≥ el2_threshold and max_leak ≤ k^{-1/2}. Throws ConditionFailed
/// tagged "el2" or "fin" with the last measured values if every attempt fails.
L1Witness find_l1_subspace(const RandomQuotientBody& body, const SeedSpec& seed,
                           const L1Options& options = {});

struct L2Options {
  /// 0 selects max(1, min(⌊c_cal·log N⌋, n)).
  std::size_t h = 0;
  double c_cal = 0.25;
  /// Permits N < n²; the witness is then marked relaxed.
  bool allow_relaxation = false;
  std::size_t distortion_samples = 256;
};

std::size_t auto_l2_dimension(std::size_t n, std::size_t N, double c_cal);

/// Haar-random G of dimension h with its section distortion and
/// complementation constant. Throws UsageError if N < n² and relaxation is
/// not allowed.
L2Witness find_l2_subspace(const RandomQuotientBody& body, const SeedSpec& seed,
                           const L2Options& options = {});

/// ‖P_G : X_n → X_n‖ = max_j ‖P_G g_j‖_B for the orthogonal projection onto
/// the span of the orthonormal `basis`.
double complementation_norm(const RandomQuotientBody& body, const Matrix& basis);

/// Largest absolute difference between stored and recomputed constants.
double reverify(const RandomQuotientBody& body, const L1Witness& witness);
double reverify(const RandomQuotientBody& body, const L2Witness& witness);

using SubspaceWitness = std::variant<L1Witness, L2Witness>;

/// ℓ1 construction when log N < √d, Euclidean otherwise, asking for
/// dimension ⌈c_cal·√d⌉ in either case.
SubspaceWitness dispatch_subspace(const RandomQuotientBody& body, const SeedSpec& seed,
                                  double c_cal = 0.25);

std::size_t witness_dimension(const SubspaceWitness& witness);

/// {"kind", "indices", "basis" (matrix text), "constants", "seed"}.
nlohmann::json witness_to_json(const SubspaceWitness& witness);
SubspaceWitness witness_from_json(const nlohmann::json& j);

}  // namespace genquot
