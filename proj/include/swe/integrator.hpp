#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swe/field.hpp"
#include "swe/polynomial.hpp"

namespace swe {

enum class Solver { iteration1, iteration2 };

// One-step parameters. The guard products are the couplings under which the
// fixed-point iterations are known to contract; exceeding a bound raises a
// flag in the trajectory record, it does not abort.
struct SchemeConfig {
  double h = 1.0 / 64;
  int n = 16;
  double T = 1.0;
  Solver solver = Solver::iteration1;
  double tol = 1e-12;
  int max_iter = 100;
  double epsilon = 0.0;  // <= 0: default h^(1/4)
  double guard_it1 = 1.0;  // bound on h^2 lambda_max^(d/3)
  double guard_it2 = 2.0;  // bound on h / epsilon^4

  double effective_epsilon() const;
  void validate() const;
};

// Per-mode entries of the determinant-one linear propagator
//   [ 2/M - 1   h/M  ]        M = 1 + lambda h^2 / 4.
//   [ -lambda h/M  2/M - 1 ]
// The map is an exact rotation in eigenvalue-weighted coordinates, hence an
// isometry of every H^r product norm.
struct CayleyFactor {
  int dim = 1, n = 1;
  double h = 0.0;
  std::vector<double> a, b, c, d;  // entries, mode-ordered like coefficients
  std::vector<double> minv;        // 1/M

  CayleyFactor(int dim, int n, double h);

  struct Entries {
    double m, a, b, c, d;
  };
  static Entries entries(double lambda, double h);
};

// Linear half of the step: per-mode application of the Cayley factor.
PhaseState cayley_step(const PhaseState& x, double h);
void cayley_step_inplace(PhaseState& x, const CayleyFactor& f);

// Exact wave group: per mode [cos(w t), sin(w t)/w; -w sin(w t), cos(w t)],
// w = sqrt(lambda).
PhaseState exact_group(const PhaseState& x, double t);

// Inverse of the backward factor alone, per mode (1/M) [1, h/2; -lambda h/2, 1];
// first-order accurate against the group, used by the order checks.
PhaseState apply_b_inverse(const PhaseState& x, double h);

struct SolverError : std::runtime_error {
  double final_distance;
  int iterations;
  SolverError(const std::string& what, double dist, int iters)
      : std::runtime_error(what), final_distance(dist), iterations(iters) {}
};

struct DetStepResult {
  SpectralField u_next;
  SpectralField v_bar;
  int iterations = 0;
  double final_distance = 0.0;  // last successive-iterate distance (stopping metric)
  bool taming_fired = false;    // iteration2 indicator ever zero
  std::vector<double> distances;  // per-iteration stopping metric, for diagnostics
};

// Implicit energy-conserving substep: solves
//   u' = u + h (vb + v)/2
//   vb = v + h L (u + u')/2 - h P_N avg f over the chord [u, u']
// by fixed-point iteration in the midpoint variable. Each pass freezes the
// even part of the chord average at the previous iterate and solves the
// remaining linear system by diagonal inversion plus a short inner sweep.
DetStepResult avf_det_step(const PhaseState& x, const SchemeConfig& cfg,
                           const CubicPolynomial& poly,
                           bool keep_history = false);

// Noise half: u unchanged, v <- v_bar + increment (projected to the state's
// truncation when sampled wider).
PhaseState stochastic_kick(const SpectralField& u, const SpectralField& v_bar,
                           const SpectralField& increment);

// Residuals of the two implicit equations at a proposed step, measured in the
// product norm components (L2 for the first, H^-1 for the second).
std::pair<double, double> avf_residual(const PhaseState& x,
                                       const SpectralField& u_next,
                                       const SpectralField& v_bar, double h,
                                       const CubicPolynomial& poly);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<int> iterations;   // per time step
  std::int64_t steps = 0;
  int max_iterations = 0;
  bool guard_it1_exceeded = false;
  bool guard_it2_exceeded = false;
  bool taming_fired = false;
};

using NoiseFn = std::function<SpectralField(std::int64_t m)>;

// Composition over m = 0..M-1 of the implicit substep and the noise kick.
// sample_steps must be sorted step indices in [0, M]; index 0 records the
// initial state. A null noise function integrates the deterministic flow.
TrajectoryRecord integrate(const PhaseState& x0, const SchemeConfig& cfg,
                           const CubicPolynomial& poly, const NoiseFn& noise,
                           const std::vector<std::int64_t>& sample_steps);

}  // namespace swe
