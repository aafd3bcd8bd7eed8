#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "genquot/matrix.hpp"

namespace genquot {

/// Identifies one reproducible random stream. Distinct stream indices under
/// the same master seed give independent streams.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// A child stream keyed by `salt`, for the independent sub-objects of one
  /// trial (body, operator, sample directions, ...).
  SeedSpec derive(std::uint64_t salt) const noexcept;
  /// The stream `offset` positions further along (used by retry loops).
  SeedSpec advance(std::uint64_t offset) const noexcept {
    return {master_seed, stream_index + offset};
  }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Parses "42" or "0x2a".
std::uint64_t parse_seed(const std::string& text);

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based generator: output i is a keyed bijective hash of i, so the
/// state is just (key pair, counter) and copying a generator forks it.
class Rng {
 public:
  explicit Rng(const SeedSpec& seed) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

 private:
  std::uint64_t key_hi_;
  std::uint64_t key_lo_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Vector gaussian_vector(std::size_t dim, double variance, Rng& rng);
/// Uniformly distributed point on the unit sphere S^{dim-1}.
Vector sphere_point(std::size_t dim, Rng& rng);

/// rows×cols matrix of i.i.d. N(0, variance) entries, filled column by column
/// so column j is the same for every cols > j.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double variance,
                       const SeedSpec& seed);

struct HaarSubspace {
  std::size_t ambient_dim = 0;
  std::size_t dim = 0;
  Matrix basis;  // ambient_dim × dim, orthonormal columns
};

/// Haar-distributed dim-dimensional subspace of R^ambient_dim, obtained by
/// orthonormalizing a standard Gaussian matrix.
HaarSubspace haar_subspace(std::size_t ambient_dim, std::size_t dim,
                           const SeedSpec& seed);

/// Haar-distributed orthogonal n×n matrix.
Matrix haar_orthogonal(std::size_t n, const SeedSpec& seed);

/// Uniformly random k-subset of {0, …, n−1}, sorted ascending.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Rng& rng);

}  // namespace genquot
