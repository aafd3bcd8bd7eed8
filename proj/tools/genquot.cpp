#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "genquot/body.hpp"
#include "genquot/calibration.hpp"
#include "genquot/constructions.hpp"
#include "genquot/errors.hpp"
#include "genquot/parallel.hpp"
#include "genquot/report.hpp"
#include "genquot/snumbers.hpp"
#include "genquot/suites.hpp"

namespace {

using namespace genquot;

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kNumeric = 3 };

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vector load_vector(const std::string& path) {
  const Matrix m = load_matrix(path);
  if (m.rows() != 1 && m.cols() != 1) throw UsageError("vector file must be n x 1 or 1 x n: " + path);
  return m.data();
}

// Lines "key = value" (blank lines and '#' comments ignored) become
// "--key value" arguments unless the command line already sets that key.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream is(path);
  if (!is) throw IoError(path, "cannot open config file");
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    if (given.count(key)) continue;
    args.push_back("--" + key);
    if (value != "true") args.push_back(value);
  }
  return args;
}

struct Options {
  std::size_t threads = 0;
  std::string thresholds = kDefaultThresholdsPath;
  std::string seed_text;
  std::uint64_t stream = 0;
  std::size_t n = 0;
  std::size_t big_n = 0;
  std::string body_path;
  std::string vector_path;
  std::string operator_path;
  std::string out;
  std::size_t samples = 0;
  std::size_t restarts = 64;
  std::size_t k = 0;
  std::size_t h = 0;
  std::size_t retries = 16;
  std::size_t grid = 201;
  std::size_t trials = 0;
  bool dual = false;
  bool reduced = false;
  bool relax = false;
  double headroom = 1.5;
  std::string kind;
  std::string suite;
  std::string format = "json";
};

SeedSpec seed_of(const Options& o) { return {parse_seed(o.seed_text), o.stream}; }

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(o.out, std::ios::binary);
  if (!os) throw IoError(o.out, "cannot open output file");
  os << text;
  if (!os) throw IoError(o.out, "failed writing output file");
}

Thresholds thresholds_for(const Options& o, bool explicit_path) {
  if (std::filesystem::exists(o.thresholds)) return load_thresholds(o.thresholds);
  if (explicit_path) throw IoError(o.thresholds, "thresholds file not found");
  std::cerr << "genquot: " << o.thresholds << " not found; using fixed thresholds only\n";
  return fixed_thresholds();
}

int run(int argc, char** argv) {
  CLI::App app{"Generic quotients of l1^N: norm oracles, s-number brackets, subspace "
               "constructions and verification suites"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.fallthrough();
  app.require_subcommand(1);
  Options o;

  app.add_flag_callback(
      "--version",
      [] {
        std::cout << "genquot " << kArtifactVersion << " (report schema " << kReportSchema
                  << ", thresholds schema " << kThresholdsSchema << ")\n";
        throw CLI::Success();
      },
      "Print artifact and schema versions");
  app.add_option("--threads", o.threads, "Worker threads (default: GENQUOT_THREADS or all cores)");
  auto* thr_opt =
      app.add_option("--thresholds", o.thresholds, "Thresholds file")->capture_default_str();

  auto seed_opt = [&](CLI::App* sc) {
    sc->add_option("--seed", o.seed_text, "Master seed (decimal or 0x-hex)")->required();
    sc->add_option("--stream", o.stream, "Stream index")->capture_default_str();
  };
  auto body_opt = [&](CLI::App* sc) {
    sc->add_option("--body", o.body_path, "Body file")->required()->check(CLI::ExistingFile);
  };

  auto* sample = app.add_subcommand("sample", "Sample a random body and write it");
  sample->add_option("--n", o.n, "Dimension n")->required();
  sample->add_option("--N", o.big_n, "Number of generators N")->required();
  seed_opt(sample);
  sample->add_option("--out", o.out, "Output body file")->required();

  auto* norm = app.add_subcommand("norm", "Gauge of B at a vector");
  body_opt(norm);
  norm->add_option("--x", o.vector_path, "Vector file")->required()->check(CLI::ExistingFile);

  auto* dnorm = app.add_subcommand("dualnorm", "Support function of B at a vector");
  body_opt(dnorm);
  dnorm->add_option("--u", o.vector_path, "Vector file")->required()->check(CLI::ExistingFile);

  auto* opnorm = app.add_subcommand("opnorm", "Operator norm on X_n");
  body_opt(opnorm);
  opnorm->add_option("--op", o.operator_path, "Operator matrix file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* radii_cmd = app.add_subcommand("radii", "Circumradius and inradius estimate");
  body_opt(radii_cmd);
  seed_opt(radii_cmd);
  radii_cmd->add_option("--restarts", o.restarts, "Subgradient restarts")->capture_default_str();

  auto* mw = app.add_subcommand("meanwidth", "Monte Carlo mean width");
  body_opt(mw);
  seed_opt(mw);
  mw->add_option("--samples", o.samples, "Sphere samples")->required();

  auto* vol = app.add_subcommand("volume", "Volume ratio per dimension");
  body_opt(vol);
  seed_opt(vol);
  vol->add_option("--samples", o.samples, "Membership samples")->required();

  auto* sn = app.add_subcommand("snumbers", "Euclidean s-numbers and Gelfand brackets");
  body_opt(sn);
  seed_opt(sn);
  sn->add_option("--op", o.operator_path, "Operator matrix file")
      ->required()
      ->check(CLI::ExistingFile);
  sn->add_option("--k", o.k, "Largest index (default n)");
  sn->add_flag("--dual", o.dual, "Kolmogorov numbers through the dual norm");
  sn->add_option("--samples", o.samples, "Sampled directions per subspace (default 32)");

  auto* shift = app.add_subcommand("shiftsearch", "Minimize c_k(T - lambda Id) over lambda");
  body_opt(shift);
  seed_opt(shift);
  shift->add_option("--op", o.operator_path, "Operator matrix file")
      ->required()
      ->check(CLI::ExistingFile);
  shift->add_option("--k", o.k, "Index k")->required();
  shift->add_option("--grid", o.grid, "Grid points")->capture_default_str();

  auto* cons = app.add_subcommand("construct", "Find a complemented l1^k or l2^h subspace");
  cons->add_option("kind", o.kind, "l1 or l2")->required()->check(CLI::IsMember({"l1", "l2"}));
  body_opt(cons);
  seed_opt(cons);
  cons->add_option("--k", o.k, "l1 dimension (default auto)");
  cons->add_option("--h", o.h, "l2 dimension (default auto)");
  cons->add_option("--retries", o.retries, "Index-set attempts")->capture_default_str();
  cons->add_flag("--allow-relaxation", o.relax, "Permit N < n^2 for l2");
  cons->add_option("--out", o.out, "Witness JSON file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", o.suite, "Suite id")->required();
  seed_opt(verify);
  verify->add_option("--trials", o.trials, "Trials per size (default per suite)");
  verify->add_flag("--reduced", o.reduced, "Small sizes and few trials");
  verify->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  verify->add_option("--out", o.out, "Report file (default stdout)");

  auto* cal = app.add_subcommand("calibrate", "Fit and freeze construction thresholds");
  seed_opt(cal);
  cal->add_option("--trials", o.trials, "Trials per size (default 50)");
  cal->add_option("--headroom", o.headroom, "Factor over observed maxima")->capture_default_str();
  cal->add_option("--out", o.out, "Thresholds file (default --thresholds path)");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  std::reverse(args.begin(), args.end());
  args = expand_config(std::move(args));
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (o.threads == 0) {
    if (const char* env = std::getenv("GENQUOT_THREADS")) {
      try {
        o.threads = std::stoul(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("GENQUOT_THREADS is not a number: ") + env);
      }
    }
  }
  set_thread_count(o.threads);
  std::cerr << "# genquot " << kArtifactVersion << " resolved configuration\n"
            << "threads=" << thread_count() << '\n'
            << app.config_to_str(true, false);

  if (sample->parsed()) {
    save_body(o.out, make_body(o.n, o.big_n, seed_of(o)));
    return kOk;
  }
  if (norm->parsed()) {
    std::cout << fmt(body_norm(load_body(o.body_path), load_vector(o.vector_path))) << '\n';
    return kOk;
  }
  if (dnorm->parsed()) {
    std::cout << fmt(dual_norm(load_body(o.body_path), load_vector(o.vector_path))) << '\n';
    return kOk;
  }
  if (opnorm->parsed()) {
    std::cout << fmt(operator_norm(load_body(o.body_path), load_matrix(o.operator_path))) << '\n';
    return kOk;
  }
  if (radii_cmd->parsed()) {
    RadiiOptions ro;
    ro.restarts = o.restarts;
    const RadiiEstimate r = radii(load_body(o.body_path), seed_of(o), ro);
    nlohmann::json j = {{"circumradius", r.circumradius},
                        {"inradius_estimate", r.inradius_estimate},
                        {"inradius_certificate", r.inradius_certificate},
                        {"exact", r.exact}};
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  if (mw->parsed()) {
    const MonteCarloEstimate m = mean_width(load_body(o.body_path), o.samples, seed_of(o));
    std::cout << nlohmann::json{{"estimate", m.estimate}, {"std_error", m.std_error}}.dump(2)
              << '\n';
    return kOk;
  }
  if (vol->parsed()) {
    const VolumeRatio v = volume_ratio(load_body(o.body_path), o.samples, seed_of(o));
    std::cout << nlohmann::json{{"ratio_per_dim", v.ratio_per_dim},
                                {"ci_low", v.ci_low},
                                {"ci_high", v.ci_high},
                                {"hits", v.hits},
                                {"samples", v.samples}}
                     .dump(2)
              << '\n';
    return kOk;
  }
  if (sn->parsed()) {
    const RandomQuotientBody body = load_body(o.body_path);
    const Matrix op = load_matrix(o.operator_path);
    BracketOptions bo;
    bo.seed = seed_of(o);
    if (o.samples != 0) bo.samples = o.samples;
    const auto brackets = gelfand_brackets(body, op, o.dual, o.k, bo);
    const Vector s = euclidean_s_numbers(o.dual ? op.transpose() : op);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : brackets) {
      arr.push_back({{"k", b.k},
                     {"euclidean", s[b.k - 1]},
                     {"lower", b.lower},
                     {"upper", b.upper},
                     {"lower_kind", to_string(b.lower_kind)},
                     {"upper_kind", to_string(b.upper_kind)}});
    }
    std::cout << nlohmann::json{{"dual", o.dual}, {"brackets", arr}}.dump(2) << '\n';
    return kOk;
  }
  if (shift->parsed()) {
    BracketOptions bo;
    bo.seed = seed_of(o);
    const ShiftSearchResult r =
        min_over_shifts(load_body(o.body_path), load_matrix(o.operator_path), o.k, o.grid, bo);
    const auto& b = r.bracket_at_best;
    std::cout << nlohmann::json{{"best_shift", r.best_shift},
                                {"best_proxy", r.best_proxy},
                                {"window", r.window},
                                {"bracket",
                                 {{"k", b.k},
                                  {"lower", b.lower},
                                  {"upper", b.upper},
                                  {"lower_kind", to_string(b.lower_kind)},
                                  {"upper_kind", to_string(b.upper_kind)}}}}
                     .dump(2)
              << '\n';
    return kOk;
  }
  if (cons->parsed()) {
    const RandomQuotientBody body = load_body(o.body_path);
    const Thresholds th = thresholds_for(o, thr_opt->count() > 0);
    SubspaceWitness w;
    if (o.kind == "l1") {
      L1Options lo;
      lo.k = o.k;
      lo.retries = o.retries;
      lo.c_cal = th.count("l1.c_cal") ? th.at("l1.c_cal") : lo.c_cal;
      lo.el2_threshold = th.count("l1.el2_threshold") ? th.at("l1.el2_threshold") : lo.el2_threshold;
      w = find_l1_subspace(body, seed_of(o), lo);
    } else {
      L2Options lo;
      lo.h = o.h;
      lo.allow_relaxation = o.relax;
      lo.c_cal = th.count("l2.c_cal") ? th.at("l2.c_cal") : lo.c_cal;
      const L2Witness l2 = find_l2_subspace(body, seed_of(o), lo);
      if (l2.relaxed) std::cerr << "genquot: warning: N < n^2, Euclidean witness is relaxed\n";
      w = l2;
    }
    emit(o, witness_to_json(w).dump(2) + "\n");
    return kOk;
  }
  if (verify->parsed()) {
    if (!is_suite(o.suite)) throw UsageError("unknown suite '" + o.suite + "'");
    const std::uint64_t seed = parse_seed(o.seed_text);
    SuiteConfig config = o.reduced ? reduced_config(o.suite, seed) : default_config(o.suite, seed);
    if (o.trials != 0) config.trials = o.trials;
    config.thresholds = thresholds_for(o, thr_opt->count() > 0);
    const SuiteReport report = run_suite(config);
    for (const auto& c : report.checks) {
      std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << fmt(c.measured) << ' '
                << c.relation << ' ' << fmt(c.bound) << '\n';
    }
    emit(o, serialize_report(report, report_format_from_string(o.format)));
    std::cerr << "suite " << o.suite << ": " << (report.pass ? "PASS" : "FAIL") << '\n';
    return report.pass ? kOk : kFail;
  }
  if (cal->parsed()) {
    CalibrationOptions co;
    co.master_seed = parse_seed(o.seed_text);
    if (o.trials != 0) co.trials = o.trials;
    co.headroom = o.headroom;
    const CalibrationResult r = calibrate(co);
    const std::string path = o.out.empty() ? o.thresholds : o.out;
    save_thresholds(path, r);
    for (const auto& [k, v] : r.thresholds) std::cerr << k << " = " << fmt(v) << '\n';
    std::cerr << "thresholds written to " << path << '\n';
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConditionFailed& e) {
    std::cerr << "genquot: " << e.what() << '\n';
    return kFail;
  } catch (const UsageError& e) {
    std::cerr << "genquot: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "genquot: I/O error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "genquot: numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const FitError& e) {
    std::cerr << "genquot: fit error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "genquot: error: " << e.what() << '\n';
    return kNumeric;
  }
}
