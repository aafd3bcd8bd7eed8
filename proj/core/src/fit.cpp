#include "genquot/fit.hpp"

#include <cmath>

#include "genquot/errors.hpp"

namespace genquot {
namespace {

struct LineFit {
  double intercept;
  double slope;
  double rms;
  double slope_se;
};

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-300)) throw FitError("fit: abscissae are all equal");
  LineFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.rms = std::sqrt(ss / m);
  f.slope_se = x.size() > 2 ? std::sqrt(ss / (m - 2.0) / sxx) : 0.0;
  return f;
}

}  // namespace

std::string to_string(FitModel model) {
  switch (model) {
    case FitModel::exp_decay:
      return "exp_decay";
    case FitModel::sqrt_ratio:
      return "sqrt_ratio";
    case FitModel::power:
      return "power";
  }
  return "unknown";
}

FitModel fit_model_from_string(const std::string& text) {
  if (text == "exp_decay") return FitModel::exp_decay;
  if (text == "sqrt_ratio") return FitModel::sqrt_ratio;
  if (text == "power") return FitModel::power;
  throw UsageError("unknown fit model '" + text + "'");
}

FitResult fit_constant(const std::vector<std::pair<double, double>>& points, FitModel model) {
  if (points.size() < 2) throw FitError("fit: need at least two points");
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw FitError("fit: non-finite point");
  }
  FitResult out;
  std::vector<double> xs, ys;
  switch (model) {
    case FitModel::exp_decay: {
      for (const auto& [x, y] : points) {
        if (!(y > 0.0)) throw FitError("fit: exp_decay needs y > 0");
        xs.push_back(x);
        ys.push_back(std::log(y));
      }
      const LineFit f = ols(xs, ys);
      out.constant = -f.slope;
      out.coefficient = std::exp(f.intercept);
      out.residual = f.rms;
      out.std_error = f.slope_se;
      return out;
    }
    case FitModel::power: {
      for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw FitError("fit: power needs x > 0 and y > 0");
        xs.push_back(std::log(x));
        ys.push_back(std::log(y));
      }
      const LineFit f = ols(xs, ys);
      out.constant = f.slope;
      out.coefficient = std::exp(f.intercept);
      out.residual = f.rms;
      out.std_error = f.slope_se;
      return out;
    }
    case FitModel::sqrt_ratio: {
      double sum = 0.0;
      for (const auto& [x, y] : points) {
        if (x == 0.0) throw FitError("fit: sqrt_ratio needs x != 0");
        ys.push_back(y / x);
        sum += y / x;
      }
      const auto m = static_cast<double>(ys.size());
      out.constant = sum / m;
      out.coefficient = out.constant;
      double ss = 0.0;
      for (double r : ys) ss += (r - out.constant) * (r - out.constant);
      out.residual = std::sqrt(ss / m);
      out.std_error = std::sqrt(ss / (m - 1.0) / m);
      return out;
    }
  }
  throw FitError("fit: unknown model");
}

}  // namespace genquot
