#pragma once

#include <utility>
#include <vector>

namespace swe {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;  // standard error of the slope
};

// Ordinary least squares y = intercept + slope x.
FitResult fit_linear(const std::vector<std::pair<double, double>>& pts);

// OLS on (log x, log y); every coordinate must be positive.
FitResult fit_slope(const std::vector<std::pair<double, double>>& pts);

}  // namespace swe
