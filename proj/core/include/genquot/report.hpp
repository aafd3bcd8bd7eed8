#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genquot/random.hpp"

namespace genquot {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kReportSchema = "genquot-report/1";

struct SuiteConfig {
  std::string suite_id;
  /// Trials per grid entry.
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  /// Integer size tuples; their meaning is fixed per suite.
  std::vector<std::vector<std::int64_t>> size_grid;
  std::map<std::string, double> thresholds;
  /// Suite-specific knobs (sample counts and the like).
  std::map<std::string, double> params;

  friend bool operator==(const SuiteConfig&, const SuiteConfig&) = default;
};

struct TrialRecord {
  std::size_t index = 0;
  SeedSpec seed{};
  std::string group;  // grid entry label, e.g. "n=8,N=16"
  std::map<std::string, double> values;
  std::string error;  // empty on success

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation;  // "<=", ">=", "<", ">"
  bool pass = false;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<TrialRecord> trials;
  std::map<std::string, double> aggregate;
  std::map<std::string, double> fitted;
  std::vector<CheckResult> checks;
  bool pass = false;
  std::string artifact_version = kArtifactVersion;

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

enum class ReportFormat { json, csv };

ReportFormat report_format_from_string(const std::string& text);

nlohmann::json report_to_json(const SuiteReport& report);
SuiteReport report_from_json(const nlohmann::json& j);

/// One row per trial after a header: index, master_seed, stream_index, group,
/// error, then every value key in sorted order.
std::string report_to_csv(const SuiteReport& report);

/// Serialized bytes exactly as write_report emits them.
std::string serialize_report(const SuiteReport& report, ReportFormat format);

/// Throws IoError naming the path on failure.
void write_report(const SuiteReport& report, ReportFormat format, const std::string& path);
SuiteReport read_report(const std::string& path);

}  // namespace genquot
