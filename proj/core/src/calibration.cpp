#include "genquot/calibration.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <utility>

#include <nlohmann/json.hpp>

#include "genquot/errors.hpp"
#include "genquot/suites.hpp"

namespace genquot {
namespace {

// Largest aggregate value whose key starts with `prefix`.
double max_aggregate(const SuiteReport& r, const std::string& prefix) {
  double best = 0.0;
  bool found = false;
  for (const auto& [k, v] : r.aggregate) {
    if (k.rfind(prefix, 0) != 0) continue;
    best = found ? std::max(best, v) : v;
    found = true;
  }
  if (!found) throw NumericError("calibration: no '" + prefix + "' values in " + r.config.suite_id);
  return best;
}

// Smallest value among aggregates whose key starts with `prefix`.
double min_aggregate(const SuiteReport& r, const std::string& prefix) {
  double best = 0.0;
  bool found = false;
  for (const auto& [k, v] : r.aggregate) {
    if (k.rfind(prefix, 0) != 0) continue;
    best = found ? std::min(best, v) : v;
    found = true;
  }
  if (!found) throw NumericError("calibration: no '" + prefix + "' values in " + r.config.suite_id);
  return best;
}

// Share of trials in `r` whose `key` value is at most `bound`, worst group.
double worst_group_rate(const SuiteReport& r, const std::string& key, double bound) {
  std::map<std::string, std::pair<double, double>> counts;  // group -> (within, total)
  for (const auto& t : r.trials) {
    const auto it = t.values.find(key);
    if (it == t.values.end()) continue;
    auto& [within, total] = counts[t.group];
    within += it->second <= bound ? 1.0 : 0.0;
    total += 1.0;
  }
  double worst = 1.0;
  for (const auto& [g, c] : counts) worst = std::min(worst, c.first / c.second);
  return worst;
}

SuiteReport run_calibration(const std::string& suite, const CalibrationOptions& options,
                            const Thresholds& thresholds) {
  SuiteConfig c = default_config(suite, options.master_seed);
  c.trials = options.trials;
  c.params["calibrate"] = 1;
  c.thresholds = thresholds;
  // Only the auto-dimension series (h = 0) enters the Euclidean thresholds.
  if (suite == "prop42") {
    std::erase_if(c.size_grid, [](const std::vector<std::int64_t>& t) { return t[2] != 0; });
  }
  return run_suite(c);
}

}  // namespace

Thresholds fixed_thresholds() {
  return {{"l1.c_cal", 0.25},       {"l1.el2_threshold", 0.25}, {"l2.c_cal", 0.25},
          {"corC.c_floor", 0.2},    {"fact31.mstar_c2", 2.0},   {"fact31.C_cap", 2.0},
          {"lemmaD.Cprime_cap", 3.0}, {"l2.distortion_target", 2.0}};
}

const std::vector<double>& dimension_constant_ladder() {
  static const std::vector<double> ladder{0.25, 0.5, 0.75, 1.0};
  return ladder;
}

CalibrationResult calibrate(const CalibrationOptions& options) {
  if (!(options.headroom >= 1.0)) throw UsageError("calibrate: headroom must be >= 1");
  if (options.trials == 0) throw UsageError("calibrate: trials must be >= 1");
  CalibrationResult out;
  out.options = options;
  out.thresholds = fixed_thresholds();

  // ℓ1: the largest ladder constant whose construction still succeeds in
  // 90% of trials. The smallest rung is kept even if it misses the rate.
  std::optional<SuiteReport> r1;
  for (double c : dimension_constant_ladder()) {
    Thresholds trial = out.thresholds;
    trial["l1.c_cal"] = c;
    SuiteReport rep = run_calibration("prop41", options, trial);
    if (r1 && min_aggregate(rep, "success_rate[") < 0.9) break;
    out.thresholds["l1.c_cal"] = c;
    r1 = std::move(rep);
  }

  // ℓ2: the largest ladder constant whose sections stay within the target
  // distortion in 90% of trials.
  const double target = out.thresholds.at("l2.distortion_target");
  std::optional<SuiteReport> r2;
  for (double c : dimension_constant_ladder()) {
    Thresholds trial = out.thresholds;
    trial["l2.c_cal"] = c;
    SuiteReport rep = run_calibration("prop42", options, trial);
    if (r2 && worst_group_rate(rep, "distortion", target) < 0.9) break;
    out.thresholds["l2.c_cal"] = c;
    r2 = std::move(rep);
  }

  const double h = options.headroom;
  out.thresholds["l1.iso_max"] = h * max_aggregate(*r1, "iso_max[");
  out.thresholds["l1.compl_max"] = h * max_aggregate(*r1, "compl_max[");
  out.thresholds["l2.distortion_max"] = h * max_aggregate(*r2, "distortion_max[");
  out.thresholds["l2.compl_max"] = h * max_aggregate(*r2, "compl_max[");
  out.thresholds["l2.radius_C1"] = h * max_aggregate(*r2, "radius_ratio_max[");
  out.reports.push_back(std::move(*r1));
  out.reports.push_back(std::move(*r2));
  return out;
}

void save_thresholds(const std::string& path, const CalibrationResult& result) {
  nlohmann::json j;
  j["schema"] = kThresholdsSchema;
  j["artifact_version"] = kArtifactVersion;
  j["calibration"] = {{"master_seed", result.options.master_seed},
                      {"trials", result.options.trials},
                      {"headroom", result.options.headroom}};
  j["thresholds"] = result.thresholds;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path, "cannot open thresholds file for writing");
  os << j.dump(2) << '\n';
  os.close();
  if (!os) throw IoError(path, "failed writing thresholds file");
}

Thresholds load_thresholds(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path, "cannot open thresholds file");
  try {
    nlohmann::json j;
    is >> j;
    if (j.at("schema").get<std::string>() != kThresholdsSchema) {
      throw UsageError("thresholds " + path + ": unsupported schema");
    }
    return j.at("thresholds").get<Thresholds>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("thresholds " + path + ": " + e.what());
  }
}

}  // namespace genquot
