#pragma once

#include <string>
#include <utility>
#include <vector>

namespace genquot {

/// exp_decay: y = a·exp(−c·x), constant c, coefficient a (fit of log y).
/// power:     y = a·x^p,       constant p, coefficient a (fit of log y on log x).
/// sqrt_ratio: y = c·x with x the model scale, constant c = mean of y/x.
enum class FitModel { exp_decay, sqrt_ratio, power };

std::string to_string(FitModel model);
FitModel fit_model_from_string(const std::string& text);

struct FitResult {
  double constant = 0.0;
  double coefficient = 0.0;
  /// Root-mean-square residual in the transformed domain.
  double residual = 0.0;
  /// Standard error of `constant` (0 when the fit is exact or has two points).
  double std_error = 0.0;
};

/// Least squares in the transformed domain. Throws FitError for fewer than two
/// points, non-positive y (log models), non-positive x (power), zero x
/// (sqrt_ratio) or constant x (exp_decay, power).
FitResult fit_constant(const std::vector<std::pair<double, double>>& points, FitModel model);

}  // namespace genquot
