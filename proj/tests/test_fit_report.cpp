#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "genquot/errors.hpp"
#include "genquot/fit.hpp"
#include "genquot/random.hpp"
#include "genquot/report.hpp"
#include "oracles.hpp"

using namespace genquot;

TEST(Fit, ExactDecay) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) pts.emplace_back(x, std::exp(-0.3 * x));
  const FitResult f = fit_constant(pts, FitModel::exp_decay);
  EXPECT_NEAR(f.constant, 0.3, 1e-9);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);
}

TEST(Fit, ExactPower) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 3.0, 10.0, 30.0}) pts.emplace_back(x, 5.0 / std::sqrt(x));
  const FitResult f = fit_constant(pts, FitModel::power);
  EXPECT_NEAR(f.constant, -0.5, 1e-9);
  EXPECT_NEAR(f.coefficient, 5.0, 1e-9);
}

TEST(Fit, SqrtRatioIsMeanRatio) {
  const FitResult f = fit_constant({{1.0, 2.0}, {2.0, 5.0}}, FitModel::sqrt_ratio);
  EXPECT_NEAR(f.constant, 2.25, 1e-15);
}

TEST(Fit, NoisyDecayWithinOracleInterval) {
  Rng rng({99, 0});
  std::vector<std::pair<double, double>> pts;
  std::vector<double> xs, logs;
  for (int i = 0; i < 40; ++i) {
    const double x = 0.5 * i;
    const double y = 2.0 * std::exp(-0.3 * x + 0.05 * rng.normal());
    pts.emplace_back(x, y);
    xs.push_back(x);
    logs.push_back(std::log(y));
  }
  const FitResult f = fit_constant(pts, FitModel::exp_decay);
  const oracle::Ols o = oracle::ols(xs, logs);
  EXPECT_NEAR(f.constant, -o.slope, 1e-10);
  EXPECT_NEAR(f.std_error, o.slope_se, 1e-10);
  EXPECT_NEAR(f.constant, 0.3, 3.0 * o.slope_se);
  EXPECT_GT(f.residual, 0.0);
}

TEST(Fit, DegenerateInputs) {
  EXPECT_THROW(fit_constant({{1.0, 1.0}}, FitModel::exp_decay), FitError);
  EXPECT_THROW(fit_constant({{1.0, 1.0}, {1.0, 2.0}}, FitModel::exp_decay), FitError);
  EXPECT_THROW(fit_constant({{1.0, -1.0}, {2.0, 2.0}}, FitModel::power), FitError);
  EXPECT_THROW(fit_constant({{0.0, 1.0}, {2.0, 2.0}}, FitModel::sqrt_ratio), FitError);
}

namespace {

SuiteReport sample_report() {
  SuiteReport r;
  r.config.suite_id = "hsbound";
  r.config.trials = 2;
  r.config.master_seed = 0xdeadbeefcafef00dULL;
  r.config.size_grid = {{8, 64}, {16, 128}};
  r.config.thresholds = {{"a.b", 0.1}};
  r.config.params = {{"x", 3.0}};
  for (std::size_t i = 0; i < 3; ++i) {
    TrialRecord t;
    t.index = i;
    t.seed = {r.config.master_seed, i};
    t.group = "n=8,N=64";
    t.values = {{"hs", 0.1 + 1.0 / 3.0 * static_cast<double>(i)}, {"tiny", 1e-300}};
    if (i == 2) t.error = "numeric: \"quoted\", comma";
    r.trials.push_back(t);
  }
  r.aggregate = {{"mean", 2.0 / 3.0}};
  r.fitted = {{"K", 1.25}};
  r.checks = {{"violations", 0.0, 0.0, "<=", true}};
  r.pass = true;
  return r;
}

}  // namespace

TEST(Report, JsonRoundTrip) {
  const SuiteReport r = sample_report();
  const auto path = std::filesystem::temp_directory_path() / "genquot_test_report.json";
  write_report(r, ReportFormat::json, path.string());
  EXPECT_EQ(read_report(path.string()), r);
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
  std::filesystem::remove(path);
}

TEST(Report, JsonCarriesSchemaAndPass) {
  const nlohmann::json j = report_to_json(sample_report());
  EXPECT_EQ(j.at("schema"), kReportSchema);
  EXPECT_EQ(j.at("suite"), "hsbound");
  EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(Report, CsvRowCount) {
  const std::string csv = report_to_csv(sample_report());
  std::istringstream is(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3u + 1u);
}

TEST(Report, UnwritablePathNamesPath) {
  const std::string path = "/nonexistent-dir/report.json";
  try {
    write_report(sample_report(), ReportFormat::json, path);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), path);
    EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
  }
}

TEST(Report, FormatParsing) {
  EXPECT_EQ(report_format_from_string("json"), ReportFormat::json);
  EXPECT_EQ(report_format_from_string("csv"), ReportFormat::csv);
  EXPECT_THROW(report_format_from_string("xml"), UsageError);
}
