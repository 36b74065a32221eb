#include "swe/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swe {
namespace {
constexpr double kTwoPiThird = 2.0943951023931954923;
}

CubicPolynomial::CubicPolynomial(double c3_, double c2_, double c1_, double c0_)
    : c3(c3_), c2(c2_), c1(c1_), c0(c0_) {
  if (!(c3 > 0.0))
    throw std::invalid_argument("cubic leading coefficient must be positive");
}

CubicPolynomial CubicPolynomial::unchecked(double c3_, double c2_, double c1_,
                                           double c0_) {
  CubicPolynomial p;
  p.c3 = c3_;
  p.c2 = c2_;
  p.c1 = c1_;
  p.c0 = c0_;
  return p;
}

double CubicPolynomial::eval(double u) const {
  return ((c3 * u + c2) * u + c1) * u + c0;
}

double CubicPolynomial::density(double u) const {
  return (((c3 / 4.0 * u + c2 / 3.0) * u + c1 / 2.0) * u + c0) * u;
}

double avf_average(const CubicPolynomial& p, double a, double b) {
  const double s = a + b;
  const double p2 = a * a + b * b;
  return p.c3 * p2 * s / 4.0 + p.c2 * (p2 + a * b) / 3.0 + p.c1 * s / 2.0 +
         p.c0;
}

std::vector<double> cubic_real_roots(double a, double b, double c, double d) {
  if (a == 0.0) throw std::invalid_argument("not a cubic");
  // depressed form t^3 + p t + q with x = t - b/(3a)
  const double shift = b / (3.0 * a);
  const double p = c / a - 3.0 * shift * shift;
  const double q =
      2.0 * shift * shift * shift - shift * (c / a) + d / a;
  std::vector<double> roots;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    roots.push_back(u + v - shift);
  } else if (p == 0.0 && q == 0.0) {
    roots.push_back(-shift);
  } else {
    // three real roots, trigonometric form
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(m * std::cos(theta - 2.0 * kTwoPiThird * k) - shift);
  }
  // one Newton polish per root
  for (double& r : roots) {
    for (int it = 0; it < 2; ++it) {
      const double f = ((a * r + b) * r + c) * r + d;
      const double df = (3.0 * a * r + 2.0 * b) * r + c;
      if (df != 0.0) r -= f / df;
    }
  }
  return roots;
}

std::pair<double, double> quartic_min(double q4, double q3, double q2,
                                      double q1, double q0) {
  if (!(q4 > 0.0))
    throw std::invalid_argument("quartic needs positive leading coefficient");
  auto eval = [&](double x) { return (((q4 * x + q3) * x + q2) * x + q1) * x + q0; };
  double best_x = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double r : cubic_real_roots(4.0 * q4, 3.0 * q3, 2.0 * q2, q1)) {
    const double v = eval(r);
    if (v < best) {
      best = v;
      best_x = r;
    }
  }
  return {best_x, best};
}

Potential::Potential(const CubicPolynomial& p) : poly(p) {
  if (!(p.c3 > 0.0))
    throw std::invalid_argument("potential requires positive leading coefficient");
  C1 = std::max(0.0, -quartic_min(p.c3 / 4.0, p.c2 / 3.0, p.c1 / 2.0, p.c0, 0.0)
                          .second);
  // envelope with leading margin c3/8 on both sides; bounds hold pointwise
  a1 = p.c3 / 8.0;
  a2 = 3.0 * p.c3 / 8.0;
  b1 = std::max(
      1e-12, -quartic_min(p.c3 / 4.0 - a1, p.c2 / 3.0, p.c1 / 2.0, p.c0, 0.0)
                  .second);
  // density - a2 u^4 has negative leading coefficient; its max is the min of
  // the negated quartic
  b2 = std::max(1e-12,
                -quartic_min(a2 - p.c3 / 4.0, -p.c2 / 3.0, -p.c1 / 2.0, -p.c0, 0.0)
                     .second);
}

Potential::Potential(const CubicPolynomial& p, double C1_) : Potential(p) {
  C1 = C1_;
}

}  // namespace swe
