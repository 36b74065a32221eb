#include "swe/slope.hpp"

#include <cmath>
#include <stdexcept>

namespace swe {

FitResult fit_linear(const std::vector<std::pair<double, double>>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw std::invalid_argument("slope fit needs at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate abscissae in slope fit");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  if (n == 2) return r;  // exact interpolation, zero residual
  double ss_res = 0.0;
  for (const auto& [x, y] : pts) {
    const double e = y - (r.intercept + r.slope * x);
    ss_res += e * e;
  }
  r.std_error = std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx);
  return r;
}

FitResult fit_slope(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::pair<double, double>> logs;
  logs.reserve(pts.size());
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("log-log fit needs positive coordinates");
    logs.emplace_back(std::log(x), std::log(y));
  }
  return fit_linear(logs);
}

}  // namespace swe
