#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genquot/report.hpp"

namespace genquot {

/// Recognized suite identifiers, in canonical order.
const std::vector<std::string>& suite_ids();
bool is_suite(const std::string& suite_id);

/// One-line description of what a suite measures and how its size tuples
/// are read.
std::string suite_description(const std::string& suite_id);

/// Full-size configuration. Throws UsageError for an unknown suite.
SuiteConfig default_config(const std::string& suite_id, std::uint64_t master_seed);

/// A few trials on the smallest sizes; used for smoke and determinism runs.
/// Suites that need calibrated thresholds run in calibration mode here.
SuiteConfig reduced_config(const std::string& suite_id, std::uint64_t master_seed);

/// Runs every trial on stream (master_seed, trial index) and evaluates the
/// suite's checks. Trials failing with NumericError are recorded and the
/// suite fails once more than 1% of trials error. Output is independent of
/// the thread count. Throws UsageError for an invalid config.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace genquot
