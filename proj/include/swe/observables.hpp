#pragma once

#include <vector>

#include "swe/field.hpp"
#include "swe/polynomial.hpp"

namespace swe {

// V1 = kinetic + elastic + potential with
//   kinetic = ||v||_{L2}^2 / 2, elastic = ||u||_{H1}^2 / 2,
//   potential = F(u) + C1.
// The quadratic parts are spectral sums (exact); the potential part shares
// the dealiased collocation grid with the chord-average projection, so the
// conserved quantity and the conservation test use one and the same
// quadrature.
struct EnergyRecord {
  double t = 0.0;
  double V1 = 0.0;
  double kinetic = 0.0;
  double elastic = 0.0;
  double potential = 0.0;
};

EnergyRecord energy_V1(const PhaseState& x, const Potential& pot);

// p in {2, 4, 6}; 2 is the spectral norm, 4 uses the 4N grid, 6 uses an 8N
// grid (sixth powers carry wavenumbers up to 6N, beyond the 4N grid's exact
// range). p = infinity (pass 0) is the grid maximum on the 8N grid and is a
// lower-bound approximation, not an exact norm.
double lp_norm(const SpectralField& u, int p);

// sqrt(||du||_{L2}^2 + ||dv||_{H^-1}^2); states with different truncations
// are compared on the coarser one (the finer is projected down).
double theorem_error(const PhaseState& a, const PhaseState& b);

struct ExpMomentEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double log_estimate = 0.0;
};

// Monte Carlo estimate of E exp(c h sum_i ||u_i||_{L6}^2) from per-trajectory
// sums of squared L6 norms. Aggregated in log space (log-sum-exp), so the
// statistic cannot overflow while being formed.
ExpMomentEstimate exp_moment(const std::vector<double>& l6sq_sums, double c,
                             double h);

}  // namespace swe
