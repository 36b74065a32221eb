#pragma once

// Test-only oracles, independent of the library's transform/projection path.
// 1D integrals use adaptive Simpson; 2D integrals use tensor composite
// Gauss-Legendre with the panel count scaled to the integrand's wavenumber
// bound (a different quadrature family and node set than the production
// rectangle rule, so agreement is meaningful).

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "swe/field.hpp"
#include "swe/polynomial.hpp"

namespace oracle {

inline double simpson_rule(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_rule(a, m, fa, flm, fm);
  const double right = simpson_rule(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Starts from 13 equal panels so that oscillations commensurate with the
// dyadic refinement pattern cannot hide from the error estimate (the first
// blind frequency moves to multiples of 52, beyond any integrand used here).
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  constexpr int kPanels = 13;
  double acc = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double pa = a + (b - a) * p / kPanels;
    const double pb = a + (b - a) * (p + 1) / kPanels;
    const double fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
    const double whole = simpson_rule(pa, pb, fa, fm, fb);
    acc += adaptive_step(f, pa, pb, fa, fm, fb, whole, tol / kPanels, 24);
  }
  return acc;
}

// 10-point Gauss-Legendre on [0,1] panels.
struct GaussGrid {
  std::vector<double> x, w;
  explicit GaussGrid(int panels) {
    static constexpr std::array<double, 5> xs = {
        0.1488743389816312108848260, 0.4333953941292471907992659,
        0.6794095682990244062343274, 0.8650633666889845107320967,
        0.9739065285171717200779640};
    static constexpr std::array<double, 5> ws = {
        0.2955242247147528701738930, 0.2692667193099963550912269,
        0.2190863625159820439955349, 0.1494513491505805931457763,
        0.0666713443086881375935688};
    const double hw = 0.5 / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) / panels;
      for (int i = 0; i < 5; ++i) {
        x.push_back(mid - hw * xs[i]);
        w.push_back(hw * ws[i]);
        x.push_back(mid + hw * xs[i]);
        w.push_back(hw * ws[i]);
      }
    }
  }
};

// Pointwise synthesis straight from the definition (no transform machinery).
inline double eval_field(const swe::SpectralField& f, double x, double y = 0.0) {
  const double s2 = std::sqrt(2.0);
  double acc = 0.0;
  if (f.dim() == 1) {
    for (int k = 1; k <= f.n(); ++k)
      acc += f.at(k) * s2 * std::sin(k * M_PI * x);
  } else {
    for (int k = 1; k <= f.n(); ++k)
      for (int l = 1; l <= f.n(); ++l)
        acc += f.at(k, l) * 2.0 * std::sin(k * M_PI * x) * std::sin(l * M_PI * y);
  }
  return acc;
}

// integral over (0,1)^2; max_wavenumber bounds the trigonometric content per
// axis and sets the panel count.
inline double integrate2(const std::function<double(double, double)>& f,
                         int max_wavenumber) {
  const GaussGrid gg(std::max(8, max_wavenumber + 4));
  double acc = 0.0;
  for (std::size_t i = 0; i < gg.x.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < gg.x.size(); ++j)
      row += gg.w[j] * f(gg.x[i], gg.x[j]);
    acc += gg.w[i] * row;
  }
  return acc;
}

// <g, e_k> (1D) by adaptive Simpson.
inline double mode_projection_1d(const std::function<double(double)>& g, int k,
                                 double tol = 1e-12) {
  const double s2 = std::sqrt(2.0);
  return integrate([&](double x) { return g(x) * s2 * std::sin(k * M_PI * x); },
                   0.0, 1.0, tol);
}

// All <g(u-like surface), e_{k,l}> for k,l <= n, sharing one evaluation grid.
// max_wavenumber bounds the content of g itself (e.g. 3n for a cubic of a
// degree-n field); the mode factor adds n.
inline std::vector<double> mode_projections_2d(
    const std::function<double(double, double)>& g, int n, int max_wavenumber) {
  const GaussGrid gg(std::max(8, max_wavenumber + n + 4));
  const std::size_t m = gg.x.size();
  std::vector<double> vals(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) vals[i * m + j] = g(gg.x[i], gg.x[j]);
  // per-axis sine tables
  std::vector<double> sx(static_cast<std::size_t>(n) * m);
  for (int k = 1; k <= n; ++k)
    for (std::size_t i = 0; i < m; ++i)
      sx[static_cast<std::size_t>(k - 1) * m + i] =
          std::sin(k * M_PI * gg.x[i]) * gg.w[i];
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  // tmp[k][j] = sum_i sx[k][i] vals[i][j]
  std::vector<double> tmp(static_cast<std::size_t>(n) * m, 0.0);
  for (int k = 0; k < n; ++k)
    for (std::size_t i = 0; i < m; ++i) {
      const double s = sx[static_cast<std::size_t>(k) * m + i];
      const double* row = vals.data() + i * m;
      double* trow = tmp.data() + static_cast<std::size_t>(k) * m;
      for (std::size_t j = 0; j < m; ++j) trow[j] += s * row[j];
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double acc = 0.0;
      const double* trow = tmp.data() + static_cast<std::size_t>(k) * m;
      const double* srow = sx.data() + static_cast<std::size_t>(l) * m;
      for (std::size_t j = 0; j < m; ++j) acc += trow[j] * srow[j];
      out[static_cast<std::size_t>(k) * n + l] = 2.0 * acc;  // e_{k,l} norm
    }
  return out;
}

// Chord average by quadrature in the chord parameter, the cross-check for
// the closed form.
inline double avf_theta_quadrature(const swe::CubicPolynomial& p, double a,
                                   double b, double tol = 1e-14) {
  return integrate([&](double th) { return p.eval(a + th * (b - a)); }, 0.0, 1.0,
                   tol);
}

}  // namespace oracle
