#include "genquot/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"

namespace genquot {
namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

SeedSpec SeedSpec::derive(std::uint64_t salt) const noexcept {
  return {master_seed, mix64(stream_index ^ mix64(salt + kGolden))};
}

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty()) throw UsageError("empty seed");
  std::size_t pos = 0;
  std::uint64_t value = 0;
  try {
    const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
    value = std::stoull(text, &pos, hex ? 16 : 10);
  } catch (const std::exception&) {
    throw UsageError("invalid seed '" + text + "'");
  }
  if (pos != text.size() || text[0] == '-') throw UsageError("invalid seed '" + text + "'");
  return value;
}

// The (master, stream) pair maps through two independent bijections, so
// distinct pairs give distinct keys.
Rng::Rng(const SeedSpec& seed) noexcept
    : key_hi_(mix64(seed.master_seed ^ 0x6A09E667F3BCC909ULL)),
      key_lo_(mix64(seed.stream_index + 0xBB67AE8584CAA73BULL)) {}

std::uint64_t Rng::next_u64() noexcept {
  ++counter_;
  return mix64(mix64(counter_ * kGolden + key_lo_) ^ key_hi_);
}

double Rng::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Lemire-style rejection keeps the result exactly uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

Vector gaussian_vector(std::size_t dim, double variance, Rng& rng) {
  const double sd = std::sqrt(variance);
  Vector v(dim);
  for (double& x : v) x = sd * rng.normal();
  return v;
}

Vector sphere_point(std::size_t dim, Rng& rng) {
  for (;;) {
    Vector v = gaussian_vector(dim, 1.0, rng);
    const double nrm = norm2(v);
    if (nrm > 1e-300) {
      scale(v, 1.0 / nrm);
      return v;
    }
  }
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double variance,
                       const SeedSpec& seed) {
  if (rows == 0 || cols == 0) throw UsageError("gaussian_matrix: dimensions must be positive");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw UsageError("gaussian_matrix: variance must be positive");
  }
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = sd * rng.normal();
  return m;
}

HaarSubspace haar_subspace(std::size_t ambient_dim, std::size_t dim, const SeedSpec& seed) {
  if (dim == 0 || dim > ambient_dim) {
    throw UsageError("haar_subspace: need 1 <= dim <= ambient_dim, got dim=" +
                     std::to_string(dim) + " ambient=" + std::to_string(ambient_dim));
  }
  auto ortho = orthonormalize_columns(gaussian_matrix(ambient_dim, dim, 1.0, seed));
  if (ortho.dropped != 0) throw NumericError("haar_subspace: degenerate Gaussian sample");
  return {ambient_dim, dim, std::move(ortho.basis)};
}

Matrix haar_orthogonal(std::size_t n, const SeedSpec& seed) {
  return haar_subspace(n, n, seed).basis;
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw UsageError("random_subset: k exceeds n");
  // Partial Fisher-Yates over an index array.
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace genquot
