#include "genquot/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "genquot/errors.hpp"

namespace genquot {
namespace {

using nlohmann::json;

// JSON has no encoding for inf/nan; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json number_map(const std::map<std::string, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = number(v);
  return out;
}

std::map<std::string, double> read_number_map(const json& j) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = read_number(v);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ReportFormat report_format_from_string(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw UsageError("unknown report format '" + text + "' (expected json or csv)");
}

nlohmann::json report_to_json(const SuiteReport& r) {
  json config = {{"trials", r.config.trials},
                 {"master_seed", r.config.master_seed},
                 {"size_grid", r.config.size_grid},
                 {"thresholds", number_map(r.config.thresholds)},
                 {"params", number_map(r.config.params)}};
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"index", t.index},
                      {"seed", {{"master_seed", t.seed.master_seed},
                                {"stream_index", t.seed.stream_index}}},
                      {"group", t.group},
                      {"values", number_map(t.values)},
                      {"error", t.error.empty() ? json(nullptr) : json(t.error)}});
  }
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", number(c.measured)},
                      {"bound", number(c.bound)},
                      {"relation", c.relation},
                      {"pass", c.pass}});
  }
  return {{"schema", kReportSchema},
          {"artifact_version", r.artifact_version},
          {"suite", r.config.suite_id},
          {"config", config},
          {"trials", trials},
          {"aggregate", number_map(r.aggregate)},
          {"fitted", number_map(r.fitted)},
          {"checks", checks},
          {"pass", r.pass}};
}

SuiteReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) {
      throw UsageError("report: unsupported schema '" + j.at("schema").get<std::string>() + "'");
    }
    SuiteReport r;
    r.artifact_version = j.at("artifact_version").get<std::string>();
    r.config.suite_id = j.at("suite").get<std::string>();
    const auto& c = j.at("config");
    r.config.trials = c.at("trials").get<std::size_t>();
    r.config.master_seed = c.at("master_seed").get<std::uint64_t>();
    r.config.size_grid = c.at("size_grid").get<std::vector<std::vector<std::int64_t>>>();
    r.config.thresholds = read_number_map(c.at("thresholds"));
    r.config.params = read_number_map(c.at("params"));
    for (const auto& t : j.at("trials")) {
      TrialRecord rec;
      rec.index = t.at("index").get<std::size_t>();
      rec.seed = {t.at("seed").at("master_seed").get<std::uint64_t>(),
                  t.at("seed").at("stream_index").get<std::uint64_t>()};
      rec.group = t.at("group").get<std::string>();
      rec.values = read_number_map(t.at("values"));
      if (!t.at("error").is_null()) rec.error = t.at("error").get<std::string>();
      r.trials.push_back(std::move(rec));
    }
    r.aggregate = read_number_map(j.at("aggregate"));
    r.fitted = read_number_map(j.at("fitted"));
    for (const auto& cj : j.at("checks")) {
      r.checks.push_back({cj.at("name").get<std::string>(), read_number(cj.at("measured")),
                          read_number(cj.at("bound")), cj.at("relation").get<std::string>(),
                          cj.at("pass").get<bool>()});
    }
    r.pass = j.at("pass").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("report: malformed JSON: ") + e.what());
  }
}

std::string report_to_csv(const SuiteReport& r) {
  std::set<std::string> keys;
  for (const auto& t : r.trials)
    for (const auto& kv : t.values) keys.insert(kv.first);
  std::ostringstream os;
  os << "index,master_seed,stream_index,group,error";
  for (const auto& k : keys) os << ',' << csv_field(k);
  os << '\n';
  for (const auto& t : r.trials) {
    os << t.index << ',' << t.seed.master_seed << ',' << t.seed.stream_index << ','
       << csv_field(t.group) << ',' << csv_field(t.error);
    for (const auto& k : keys) {
      os << ',';
      if (auto it = t.values.find(k); it != t.values.end()) os << format_double(it->second);
    }
    os << '\n';
  }
  return os.str();
}

std::string serialize_report(const SuiteReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) return report_to_csv(report);
  return report_to_json(report).dump(2) + "\n";
}

void write_report(const SuiteReport& report, ReportFormat format, const std::string& path) {
  const std::string bytes = serialize_report(report, format);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path, "cannot open report for writing");
  os << bytes;
  os.close();
  if (!os) throw IoError(path, "failed writing report");
}

SuiteReport read_report(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path, "cannot open report for reading");
  json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("report " + path + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace genquot
