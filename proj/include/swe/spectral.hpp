#pragma once

#include <memory>
#include <vector>

#include "swe/field.hpp"

namespace swe {

inline constexpr double kPi = 3.14159265358979323846;

// Dirichlet Laplacian eigenvalue on (0,1)^d: pi^2 (k^2 [+ l^2]).
double eigenvalue(const ModeIndex& m, int dim);

// Eigenvalues for all retained modes, in coefficient-storage order.
const std::vector<double>& eigenvalue_table(int dim, int n);

// Largest retained eigenvalue, pi^2 d n^2.
double max_eigenvalue(int dim, int n);

// || u ||_{H^r} = sqrt(sum lambda^r u_k^2); r = 0 is the plain L2 norm.
double sobolev_norm(const SpectralField& f, double r);

// Product-space norm sqrt(||u||_{H^r}^2 + ||v||_{H^{r-1}}^2).
double phase_norm(const PhaseState& x, double r);

// Truncation to wavenumbers <= n_out (zero-padding when n_out > n).
SpectralField project(const SpectralField& f, int n_out);

// Coefficients of the constant function c: <c, e_k> = c sqrt(2)(1-(-1)^k)/(k pi),
// tensor product across dimensions. Constants are not band-limited, so this
// is evaluated analytically rather than through grid quadrature.
SpectralField project_constant(double value, int dim, int n);

// Direct dense sine transform between coefficients and the interior
// collocation grid x_j = j/G. The analysis direction is the exact left
// inverse of synthesis whenever every wavenumber is < G.
class SineTransform {
 public:
  SineTransform(int dim, int n, int g);

  int dim() const { return dim_; }
  int n() const { return n_; }
  int g() const { return g_; }

  void synthesize(const SpectralField& f, GridField& out) const;
  void analyze(const GridField& grid, SpectralField& out) const;

  GridField synthesize(const SpectralField& f) const;
  SpectralField analyze(const GridField& grid, int n_out) const;

 private:
  int dim_, n_, g_;
  std::vector<double> syn_;    // (g-1) x n, sqrt(2) sin(k pi j / g)
  std::vector<double> syn_t_;  // n x (g-1)
  std::vector<double> ana_;    // (g-1) x n, syn / g
  std::vector<double> ana_t_;  // n x (g-1)
};

// Shared, immutable plans keyed by (dim, n, g).
std::shared_ptr<const SineTransform> transform_plan(int dim, int n, int g);

// Free-function views of the two directions with precondition checks.
GridField synthesize(const SpectralField& f, int g);
SpectralField analyze(const GridField& grid, int n);

}  // namespace swe
