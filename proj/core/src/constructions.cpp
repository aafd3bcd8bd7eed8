#include "genquot/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genquot/errors.hpp"
#include "genquot/linalg.hpp"

namespace genquot {
namespace {

Matrix column_block(const RandomQuotientBody& body, const std::vector<std::size_t>& idx) {
  Matrix out(body.n(), idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) out.set_column(c, body.column(idx[c]));
  return out;
}

double smallest_singular_value(const Matrix& m) {
  if (m.cols() > m.rows()) return 0.0;
  return singular_values(m).back();
}

double normalized_sigma_min(const RandomQuotientBody& body,
                            const std::vector<std::size_t>& idx) {
  Matrix block = column_block(body, idx);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const double inv = 1.0 / body.column_norms()[idx[c]];
    for (std::size_t i = 0; i < block.rows(); ++i) block(i, c) *= inv;
  }
  return smallest_singular_value(block);
}

double max_leak(const RandomQuotientBody& body, const Matrix& basis,
                const std::vector<std::size_t>& idx) {
  double leak = 0.0;
  for (std::size_t j = 0; j < body.N(); ++j) {
    if (std::binary_search(idx.begin(), idx.end(), j)) continue;
    leak = std::max(leak, norm2(orth_project(basis, body.column(j))));
  }
  return leak;
}

// Solves (Γ_AᵀΓ_A) c = rhs by Cholesky; the Gram matrix is positive definite
// once the block passed the σ_min check.
class GramSolver {
 public:
  explicit GramSolver(const Matrix& block) : k_(block.cols()), l_(k_, k_) {
    const Matrix gram = block.transpose() * block;
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = gram(i, j);
        for (std::size_t p = 0; p < j; ++p) s -= l_(i, p) * l_(j, p);
        if (i == j) {
          if (!(s > 0.0)) throw NumericError("gram solve: block is not of full rank");
          l_(i, i) = std::sqrt(s);
        } else {
          l_(i, j) = s / l_(j, j);
        }
      }
    }
  }

  Vector solve(Vector rhs) const {
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t p = 0; p < i; ++p) rhs[i] -= l_(i, p) * rhs[p];
      rhs[i] /= l_(i, i);
    }
    for (std::size_t i = k_; i-- > 0;) {
      for (std::size_t p = i + 1; p < k_; ++p) rhs[i] -= l_(p, i) * rhs[p];
      rhs[i] /= l_(i, i);
    }
    return rhs;
  }

 private:
  std::size_t k_;
  Matrix l_;
};

// ‖P_E g_j‖_B over all j, pruned by the representation bound ‖c‖₁ where
// P_E g_j = Γ_A c.
double l1_complementation(const RandomQuotientBody& body, const Matrix& basis,
                          const std::vector<std::size_t>& idx) {
  const Matrix block = column_block(body, idx);
  const GramSolver gram(block);
  std::vector<Vector> images(body.N());
  Vector bounds(body.N());
  for (std::size_t j = 0; j < body.N(); ++j) {
    images[j] = orth_project(basis, body.column(j));
    bounds[j] = norm1(gram.solve(multiply_transposed(block, body.column(j))));
  }
  return max_body_norm(body, images, bounds).value;
}

struct InverseNorm {
  double value;
  BoundKind kind;
};

// ‖u⁻¹‖ = sup_{x ∈ B∩E} ‖c(x)‖₁ with c(x) = G⁻¹Γ_Aᵀx, i.e. the largest
// support value of B∩E in the directions Γ_A G⁻¹ ε over sign vectors ε.
InverseNorm l1_inverse_norm(const RandomQuotientBody& body, const Matrix& basis,
                            const std::vector<std::size_t>& idx, const SeedSpec& seed,
                            const L1Options& options) {
  const std::size_t k = idx.size();
  const Matrix block = column_block(body, idx);
  if (k <= options.exact_inverse_max_k) {
    const GramSolver gram(block);
    const SectionSupport support(body, basis);
    double best = 0.0;
    // ε and −ε give the same value; fix ε_0 = +1.
    const std::size_t patterns = std::size_t{1} << (k - 1);
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      Vector eps(k, 1.0);
      for (std::size_t i = 1; i < k; ++i)
        if ((mask >> (i - 1)) & 1U) eps[i] = -1.0;
      const Vector w = block * gram.solve(eps);
      best = std::max(best, support(w));
    }
    return {best, BoundKind::exact};
  }
  // ‖c‖₁ ≤ √k‖c‖₂ ≤ √k‖x‖₂/σ_min(Γ_A), and ‖x‖₂/‖x‖_B is sampled on E.
  Rng rng(seed.derive(0x1c0ffee));
  double ratio = 0.0;
  for (std::size_t s = 0; s < options.inverse_samples; ++s) {
    const Vector c = sphere_point(k, rng);
    const Vector x = basis * c;
    ratio = std::max(ratio, norm2(x) / body_norm(body, x));
  }
  return {std::sqrt(static_cast<double>(k)) / smallest_singular_value(block) * ratio,
          BoundKind::sampled};
}

}  // namespace

std::size_t auto_l1_dimension(std::size_t n, std::size_t N, double c_cal) {
  const double dn = static_cast<double>(n);
  const double logN = std::log(static_cast<double>(N));
  const double base = logN > 0.0 ? std::min(std::sqrt(dn), dn / logN) : std::sqrt(dn);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(c_cal * base)));
}

std::size_t auto_l2_dimension(std::size_t n, std::size_t N, double c_cal) {
  const auto h = static_cast<std::size_t>(std::floor(c_cal * std::log(static_cast<double>(N))));
  return std::max<std::size_t>(1, std::min(h, n));
}

L1Witness find_l1_subspace(const RandomQuotientBody& body, const SeedSpec& seed,
                           const L1Options& options) {
  const std::size_t k =
      options.k != 0 ? options.k : auto_l1_dimension(body.n(), body.N(), options.c_cal);
  if (k > body.N()) throw UsageError("find_l1_subspace: k exceeds N");
  if (options.retries == 0) throw UsageError("find_l1_subspace: retries must be positive");
  const double fin_bound = 1.0 / std::sqrt(static_cast<double>(k));

  std::string tag;
  double measured = 0.0;
  double bound = 0.0;
  for (std::size_t attempt = 0; attempt < options.retries; ++attempt) {
    const SeedSpec stream = seed.advance(attempt);
    Rng rng(stream);
    std::vector<std::size_t> idx = random_subset(body.N(), k, rng);

    const double sigma = normalized_sigma_min(body, idx);
    if (!(sigma >= options.el2_threshold)) {
      tag = "el2";
      measured = sigma;
      bound = options.el2_threshold;
      continue;
    }
    const Matrix basis = orthonormalize_columns(column_block(body, idx)).basis;
    const double leak = max_leak(body, basis, idx);
    if (!(leak <= fin_bound)) {
      tag = "fin";
      measured = leak;
      bound = fin_bound;
      continue;
    }

    L1Witness w;
    w.indices = std::move(idx);
    w.basis = basis;
    w.sigma_min = sigma;
    w.max_leak = leak;
    for (std::size_t j : w.indices) w.u_norm = std::max(w.u_norm, body_norm(body, body.column(j)));
    const InverseNorm inv = l1_inverse_norm(body, w.basis, w.indices, stream, options);
    w.u_inverse_norm = inv.value;
    w.u_inverse_kind = inv.kind;
    w.iso_constant = w.u_norm * w.u_inverse_norm;
    w.compl_constant = l1_complementation(body, w.basis, w.indices);
    w.attempts = attempt + 1;
    w.seed = stream;
    return w;
  }
  std::ostringstream detail;
  detail << tag << ": measured " << measured << (tag == "el2" ? " < " : " > ") << bound
         << " after " << options.retries << " attempts (k = " << k << ")";
  throw ConditionFailed(tag, measured, bound, detail.str());
}

double complementation_norm(const RandomQuotientBody& body, const Matrix& basis) {
  if (basis.rows() != body.n()) throw UsageError("complementation_norm: dimension mismatch");
  require_orthonormal(basis);
  std::vector<Vector> images(body.N());
  for (std::size_t j = 0; j < body.N(); ++j) images[j] = orth_project(basis, body.column(j));
  return max_body_norm(body, images).value;
}

L2Witness find_l2_subspace(const RandomQuotientBody& body, const SeedSpec& seed,
                           const L2Options& options) {
  const std::size_t n = body.n();
  const std::size_t N = body.N();
  L2Witness w;
  if (N < n * n) {
    if (!options.allow_relaxation) {
      throw UsageError("find_l2_subspace: requires N >= n^2 (N = " + std::to_string(N) +
                       ", n = " + std::to_string(n) + "); enable relaxation to override");
    }
    w.relaxed = true;
  }
  const std::size_t h = options.h != 0 ? options.h : auto_l2_dimension(n, N, options.c_cal);
  if (h > n) throw UsageError("find_l2_subspace: h exceeds n");
  w.seed = seed;
  w.subspace = haar_subspace(n, h, seed);
  const SectionDistortion d =
      section_distortion(body, w.subspace.basis, options.distortion_samples, seed.derive(2));
  w.max_gauge = d.max_gauge;
  w.min_gauge = d.min_gauge;
  w.distortion = d.distortion();
  w.compl_constant = complementation_norm(body, w.subspace.basis);
  for (std::size_t j = 0; j < N; ++j) {
    w.proj_image_radius =
        std::max(w.proj_image_radius, norm2(orth_project(w.subspace.basis, body.column(j))));
  }
  w.radius_ratio =
      w.proj_image_radius / std::sqrt(static_cast<double>(h) / static_cast<double>(n));
  return w;
}

double reverify(const RandomQuotientBody& body, const L1Witness& witness) {
  const Matrix basis = orthonormalize_columns(column_block(body, witness.indices)).basis;
  double dev = std::abs(normalized_sigma_min(body, witness.indices) - witness.sigma_min);
  dev = std::max(dev, std::abs(max_leak(body, basis, witness.indices) - witness.max_leak));
  dev = std::max(dev, std::abs(l1_complementation(body, basis, witness.indices) -
                               witness.compl_constant));
  dev = std::max(dev, orthonormality_defect(witness.basis));
  return dev;
}

double reverify(const RandomQuotientBody& body, const L2Witness& witness) {
  const Matrix& basis = witness.subspace.basis;
  double radius = 0.0;
  for (std::size_t j = 0; j < body.N(); ++j)
    radius = std::max(radius, norm2(orth_project(basis, body.column(j))));
  double dev = std::abs(radius - witness.proj_image_radius);
  dev = std::max(dev, std::abs(complementation_norm(body, basis) - witness.compl_constant));
  return dev;
}

SubspaceWitness dispatch_subspace(const RandomQuotientBody& body, const SeedSpec& seed,
                                  double c_cal) {
  const double d = static_cast<double>(body.n());
  const auto dim = static_cast<std::size_t>(std::ceil(c_cal * std::sqrt(d)));
  if (std::log(static_cast<double>(body.N())) < std::sqrt(d)) {
    L1Options opt;
    opt.k = std::max<std::size_t>(1, dim);
    return find_l1_subspace(body, seed, opt);
  }
  L2Options opt;
  opt.h = std::clamp<std::size_t>(dim, 1, body.n());
  opt.allow_relaxation = true;
  return find_l2_subspace(body, seed, opt);
}

std::size_t witness_dimension(const SubspaceWitness& witness) {
  if (const auto* l1 = std::get_if<L1Witness>(&witness)) return l1->indices.size();
  return std::get<L2Witness>(witness).subspace.dim;
}

namespace {

nlohmann::json seed_json(const SeedSpec& s) {
  return {{"master_seed", s.master_seed}, {"stream_index", s.stream_index}};
}

SeedSpec seed_from_json(const nlohmann::json& j) {
  return {j.at("master_seed").get<std::uint64_t>(), j.at("stream_index").get<std::uint64_t>()};
}

}  // namespace

nlohmann::json witness_to_json(const SubspaceWitness& witness) {
  nlohmann::json j;
  if (const auto* w = std::get_if<L1Witness>(&witness)) {
    j["kind"] = "l1";
    j["indices"] = w->indices;
    j["basis"] = to_matrix_text(w->basis);
    j["constants"] = {{"sigma_min", w->sigma_min},
                      {"max_leak", w->max_leak},
                      {"u_norm", w->u_norm},
                      {"u_inverse_norm", w->u_inverse_norm},
                      {"u_inverse_kind", to_string(w->u_inverse_kind)},
                      {"iso_constant", w->iso_constant},
                      {"compl_constant", w->compl_constant},
                      {"attempts", w->attempts}};
    j["seed"] = seed_json(w->seed);
  } else {
    const auto& w2 = std::get<L2Witness>(witness);
    j["kind"] = "l2";
    j["indices"] = nlohmann::json::array();
    j["basis"] = to_matrix_text(w2.subspace.basis);
    j["constants"] = {{"max_gauge", w2.max_gauge},
                      {"min_gauge", w2.min_gauge},
                      {"distortion", w2.distortion},
                      {"compl_constant", w2.compl_constant},
                      {"proj_image_radius", w2.proj_image_radius},
                      {"radius_ratio", w2.radius_ratio},
                      {"relaxed", w2.relaxed}};
    j["seed"] = seed_json(w2.seed);
  }
  return j;
}

SubspaceWitness witness_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const Matrix basis = from_matrix_text(j.at("basis").get<std::string>());
    const auto& c = j.at("constants");
    if (kind == "l1") {
      L1Witness w;
      w.indices = j.at("indices").get<std::vector<std::size_t>>();
      w.basis = basis;
      w.sigma_min = c.at("sigma_min").get<double>();
      w.max_leak = c.at("max_leak").get<double>();
      w.u_norm = c.at("u_norm").get<double>();
      w.u_inverse_norm = c.at("u_inverse_norm").get<double>();
      w.u_inverse_kind = bound_kind_from_string(c.at("u_inverse_kind").get<std::string>());
      w.iso_constant = c.at("iso_constant").get<double>();
      w.compl_constant = c.at("compl_constant").get<double>();
      w.attempts = c.at("attempts").get<std::size_t>();
      w.seed = seed_from_json(j.at("seed"));
      return w;
    }
    if (kind == "l2") {
      L2Witness w;
      w.subspace = {basis.rows(), basis.cols(), basis};
      w.max_gauge = c.at("max_gauge").get<double>();
      w.min_gauge = c.at("min_gauge").get<double>();
      w.distortion = c.at("distortion").get<double>();
      w.compl_constant = c.at("compl_constant").get<double>();
      w.proj_image_radius = c.at("proj_image_radius").get<double>();
      w.radius_ratio = c.at("radius_ratio").get<double>();
      w.relaxed = c.at("relaxed").get<bool>();
      w.seed = seed_from_json(j.at("seed"));
      return w;
    }
    throw UsageError("witness: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("witness: malformed JSON: ") + e.what());
  }
}

}  // namespace genquot
