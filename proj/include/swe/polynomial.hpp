#pragma once

#include <vector>

namespace swe {

// f(u) = c3 u^3 + c2 u^2 + c1 u + c0 with c3 > 0. The strict sign makes the
// implicit step well posed; `unchecked` exists for linear reductions in tests.
struct CubicPolynomial {
  double c3 = 1.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;

  CubicPolynomial() = default;
  CubicPolynomial(double c3_, double c2_, double c1_, double c0_);
  static CubicPolynomial unchecked(double c3_, double c2_, double c1_,
                                   double c0_);

  double eval(double u) const;
  // antiderivative density  c3 u^4/4 + c2 u^3/3 + c1 u^2/2 + c0 u
  double density(double u) const;
};

// Chord average int_0^1 f(a + t (b - a)) dt in closed form; equals
// (density(b) - density(a)) / (b - a) for a != b and f(a) on the diagonal.
double avf_average(const CubicPolynomial& p, double a, double b);

// Real roots of a x^3 + b x^2 + c x + d, a != 0.
std::vector<double> cubic_real_roots(double a, double b, double c, double d);

// Global minimum of a quartic with positive leading coefficient, reported as
// (argmin, value).
std::pair<double, double> quartic_min(double q4, double q3, double q2,
                                      double q1, double q0);

// Potential with its nonnegativity shift and quartic growth envelope:
//   a1 ||u||_{L4}^4 - b1 <= F(u) <= a2 ||u||_{L4}^4 + b2.
// C1 defaults to max(0, -min density), so the shifted density is >= 0
// pointwise and energies are nonnegative.
struct Potential {
  CubicPolynomial poly;
  double C1 = 0.0;
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;

  explicit Potential(const CubicPolynomial& p);
  Potential(const CubicPolynomial& p, double C1_);
};

}  // namespace swe
