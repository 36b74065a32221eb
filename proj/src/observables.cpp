#include "swe/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swe/kernels.hpp"
#include "swe/nonlinearity.hpp"
#include "swe/spectral.hpp"

namespace swe {

EnergyRecord energy_V1(const PhaseState& x, const Potential& pot) {
  const auto& ops = kern::ops();
  EnergyRecord rec;
  rec.kinetic = 0.5 * ops.sumsq(x.v.data(), x.v.size());
  const auto& lam = eigenvalue_table(x.dim(), x.n());
  rec.elastic = 0.5 * ops.weighted_sumsq(lam.data(), x.u.data(), x.u.size());
  rec.potential = potential_integral(pot.poly, x.u) + pot.C1;
  rec.V1 = rec.kinetic + rec.elastic + rec.potential;
  return rec;
}

namespace {

double grid_power_norm(const SpectralField& u, int p, int g) {
  GridField grid = transform_plan(u.dim(), u.n(), g)->synthesize(u);
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.v[i];
    const double x2 = x * x;
    acc[i % 4] += (p == 4) ? x2 * x2 : x2 * x2 * x2;
  }
  const double sum = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  const double w = (u.dim() == 1) ? 1.0 / g : 1.0 / (static_cast<double>(g) * g);
  return std::pow(sum * w, 1.0 / p);
}

}  // namespace

double lp_norm(const SpectralField& u, int p) {
  switch (p) {
    case 2:
      return std::sqrt(kern::ops().sumsq(u.data(), u.size()));
    case 4:
      return grid_power_norm(u, 4, 4 * u.n());
    case 6:
      return grid_power_norm(u, 6, 8 * u.n());
    case 0: {  // infinity
      GridField grid = transform_plan(u.dim(), u.n(), 8 * u.n())->synthesize(u);
      double m = 0.0;
      for (double x : grid.v) m = std::max(m, std::abs(x));
      return m;
    }
    default:
      throw std::invalid_argument("unsupported Lp exponent");
  }
}

double theorem_error(const PhaseState& a, const PhaseState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("states have incompatible dimensions");
  const int n = std::min(a.n(), b.n());
  const PhaseState* pa = &a;
  const PhaseState* pb = &b;
  PhaseState ta, tb;
  if (a.n() != n) {
    ta = PhaseState(project(a.u, n), project(a.v, n));
    pa = &ta;
  }
  if (b.n() != n) {
    tb = PhaseState(project(b.u, n), project(b.v, n));
    pb = &tb;
  }
  const auto& ops = kern::ops();
  const std::size_t sz = pa->u.size();
  std::vector<double> du(sz), dv(sz);
  for (std::size_t i = 0; i < sz; ++i) du[i] = pa->u.data()[i] - pb->u.data()[i];
  for (std::size_t i = 0; i < sz; ++i) dv[i] = pa->v.data()[i] - pb->v.data()[i];
  const auto& lam = eigenvalue_table(pa->dim(), n);
  std::vector<double> invlam(sz);
  for (std::size_t i = 0; i < sz; ++i) invlam[i] = 1.0 / lam[i];
  const double e2 = ops.sumsq(du.data(), sz) +
                    ops.weighted_sumsq(invlam.data(), dv.data(), sz);
  return std::sqrt(e2);
}

ExpMomentEstimate exp_moment(const std::vector<double>& l6sq_sums, double c,
                             double h) {
  if (l6sq_sums.empty())
    throw std::invalid_argument("exponential moment needs at least one trajectory");
  const auto n = static_cast<double>(l6sq_sums.size());
  // log-sum-exp of x_i = c h S_i and of 2 x_i
  double xmax = -std::numeric_limits<double>::infinity();
  for (double s : l6sq_sums) xmax = std::max(xmax, c * h * s);
  double se1 = 0.0, se2 = 0.0;
  for (double s : l6sq_sums) {
    const double x = c * h * s;
    se1 += std::exp(x - xmax);
    se2 += std::exp(2.0 * (x - xmax));
  }
  const double log_mean = xmax + std::log(se1 / n);
  const double log_meansq = 2.0 * xmax + std::log(se2 / n);

  ExpMomentEstimate est;
  est.log_estimate = log_mean;
  est.estimate = std::exp(log_mean);
  if (l6sq_sums.size() == 1) {
    est.std_error = 0.0;
    return est;
  }
  // var = (E X^2 - (E X)^2) n/(n-1), kept in log space until the last step
  const double ratio = 2.0 * log_mean - log_meansq;  // <= 0 by Jensen
  const double log_var =
      log_meansq + std::log1p(-std::exp(ratio)) + std::log(n / (n - 1.0));
  est.std_error = std::exp(0.5 * (log_var - std::log(n)));
  if (!std::isfinite(est.std_error)) est.std_error = 0.0;  // degenerate sample
  return est;
}

}  // namespace swe
