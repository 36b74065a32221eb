#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "swe/polynomial.hpp"

using namespace swe;

TEST_CASE("cubic evaluation and antiderivative") {
  const CubicPolynomial p(1.0, 0.0, -1.0, 0.0);  // u^3 - u
  CHECK(p.eval(1.0) == doctest::Approx(0.0));
  CHECK(p.eval(2.0) == doctest::Approx(6.0));

  // central finite difference of the density matches f
  const double u = 0.7, dh = 1e-5;
  const double fd = (p.density(u + dh) - p.density(u - dh)) / (2.0 * dh);
  CHECK(fd == doctest::Approx(p.eval(u)).epsilon(1e-8));
}

TEST_CASE("leading coefficient must be positive") {
  CHECK_THROWS(CubicPolynomial(0.0, 0.0, 1.0, 0.0));
  CHECK_THROWS(CubicPolynomial(-1.0, 0.0, 0.0, 0.0));
  CHECK_NOTHROW(CubicPolynomial(0.5, -2.0, 3.0, 4.0));
  CHECK_NOTHROW(CubicPolynomial::unchecked(0.0, 0.0, 0.0, 0.0));
}

TEST_CASE("chord average: closed form properties") {
  const CubicPolynomial p(1.0, 0.0, -1.0, 0.0);
  CHECK(avf_average(p, 0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(avf_average(p, -1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));

  std::mt19937 rng(17);
  std::normal_distribution<double> d(0.0, 2.0);
  const CubicPolynomial q(0.8, -0.5, 1.2, 0.3);
  for (int i = 0; i < 200; ++i) {
    const double a = d(rng), b = d(rng);
    // symmetry and diagonal reduction
    CHECK(avf_average(q, a, b) == doctest::Approx(avf_average(q, b, a)).epsilon(1e-14));
    CHECK(avf_average(q, a, a) == doctest::Approx(q.eval(a)).epsilon(1e-13));
    // discrete gradient identity
    if (std::abs(b - a) > 1e-6) {
      const double lhs = avf_average(q, a, b) * (b - a);
      const double rhs = q.density(b) - q.density(a);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
}

TEST_CASE("chord average agrees with quadrature in the chord parameter") {
  std::mt19937 rng(29);
  std::normal_distribution<double> d(0.0, 1.5);
  const CubicPolynomial polys[] = {CubicPolynomial(1.0, 0.0, -1.0, 0.0),
                                   CubicPolynomial(0.8, -0.5, 1.2, 0.3)};
  for (const auto& p : polys)
    for (int i = 0; i < 500; ++i) {
      const double a = d(rng), b = d(rng);
      const double closed = avf_average(p, a, b);
      const double quad = oracle::avf_theta_quadrature(p, a, b);
      CHECK(closed == doctest::Approx(quad).epsilon(1e-12));
    }
}

TEST_CASE("cubic roots and quartic minimum") {
  // u^3 - u: roots -1, 0, 1
  auto roots = cubic_real_roots(1.0, 0.0, -1.0, 0.0);
  std::sort(roots.begin(), roots.end());
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(0.0));
  CHECK(roots[2] == doctest::Approx(1.0).epsilon(1e-12));

  // single real root
  auto r1 = cubic_real_roots(1.0, 0.0, 1.0, -2.0);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0] == doctest::Approx(1.0).epsilon(1e-12));

  const auto [xmin, vmin] = quartic_min(0.25, 0.0, -0.5, 0.0, 0.0);
  CHECK(std::abs(std::abs(xmin) - 1.0) < 1e-12);
  CHECK(vmin == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("potential shift and growth envelope") {
  // u^3 - u: density minimum -1/4, so C1 = 1/4
  const Potential pot(CubicPolynomial(1.0, 0.0, -1.0, 0.0));
  CHECK(pot.C1 == doctest::Approx(0.25).epsilon(1e-12));

  // pure cubic: density >= 0 everywhere, no shift needed
  const Potential pot3(CubicPolynomial(1.0, 0.0, 0.0, 0.0));
  CHECK(pot3.C1 == doctest::Approx(0.0));

  // pointwise envelope a1 u^4 - b1 <= density <= a2 u^4 + b2
  std::mt19937 rng(5);
  std::normal_distribution<double> d(0.0, 3.0);
  const Potential pots[] = {pot, Potential(CubicPolynomial(0.8, -0.5, 1.2, 0.3))};
  for (const auto& P : pots) {
    CHECK(P.a1 > 0.0);
    CHECK(P.a2 > 0.0);
    CHECK(P.b1 > 0.0);
    CHECK(P.b2 > 0.0);
    for (int i = 0; i < 2000; ++i) {
      const double u = d(rng);
      const double u4 = u * u * u * u;
      const double f = P.poly.density(u);
      CHECK(f >= P.a1 * u4 - P.b1 - 1e-12);
      CHECK(f <= P.a2 * u4 + P.b2 + 1e-12);
    }
    // shifted density is nonnegative (checked at the analytic minimum)
    const double vmin =
        quartic_min(P.poly.c3 / 4.0, P.poly.c2 / 3.0, P.poly.c1 / 2.0, P.poly.c0, 0.0)
            .second;
    CHECK(vmin + P.C1 >= -1e-14);
  }
}
