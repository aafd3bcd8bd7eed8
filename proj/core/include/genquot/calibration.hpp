#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "genquot/report.hpp"

namespace genquot {

using Thresholds = std::map<std::string, double>;

inline constexpr const char* kThresholdsSchema = "genquot-thresholds/1";
inline constexpr const char* kDefaultThresholdsPath = "genquot-thresholds.json";

/// Entries that are fixed rather than fitted: the starting dimension
/// constants, the σ_min acceptance level, the target section distortion and
/// the per-suite reference constants.
Thresholds fixed_thresholds();

/// Candidate values for the construction dimension constants, ascending.
const std::vector<double>& dimension_constant_ladder();

struct CalibrationOptions {
  std::uint64_t master_seed = 0;
  std::size_t trials = 50;
  /// Fitted maxima are multiplied by this factor before freezing.
  double headroom = 1.5;
};

struct CalibrationResult {
  Thresholds thresholds;
  std::vector<SuiteReport> reports;  // the calibration-mode runs
  CalibrationOptions options;
};

/// Runs the construction suites in calibration mode at their default sizes.
/// l1.c_cal becomes the largest ladder value with a success rate of at least
/// 90%; l2.c_cal the largest whose section distortion stays within
/// l2.distortion_target in at least 90% of trials. Each witness constant is
/// then frozen at headroom × (largest value observed at the chosen constant).
CalibrationResult calibrate(const CalibrationOptions& options);

/// {"schema", "artifact_version", "calibration": {...}, "thresholds": {...}}.
void save_thresholds(const std::string& path, const CalibrationResult& result);
/// Throws IoError if unreadable, UsageError if malformed.
Thresholds load_thresholds(const std::string& path);

}  // namespace genquot
