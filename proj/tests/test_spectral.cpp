#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "swe/nonlinearity.hpp"
#include "swe/spectral.hpp"

using namespace swe;

namespace {
SpectralField random_field(int dim, int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  SpectralField f(dim, n);
  for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] = dist(rng);
  return f;
}
}  // namespace

TEST_CASE("Dirichlet eigenvalues") {
  CHECK(eigenvalue({1, 1}, 1) == doctest::Approx(kPi * kPi).epsilon(1e-14));
  CHECK(eigenvalue({3, 1}, 1) == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-14));
  CHECK(eigenvalue({1, 2}, 2) == doctest::Approx(5.0 * kPi * kPi).epsilon(1e-14));
  CHECK(eigenvalue({1, 1}, 2) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
  CHECK_THROWS(eigenvalue({0, 1}, 1));
}

TEST_CASE("eigenvalue ordering is nondecreasing when sorted, min is pi^2 d") {
  for (int dim : {1, 2}) {
    auto lam = eigenvalue_table(dim, 6);
    std::sort(lam.begin(), lam.end());
    for (std::size_t i = 1; i < lam.size(); ++i) CHECK(lam[i] >= lam[i - 1]);
    CHECK(lam.front() == doctest::Approx(kPi * kPi * dim).epsilon(1e-14));
  }
}

TEST_CASE("synthesis hits known point values") {
  SpectralField f(1, 4);
  f.at(1) = 1.0;
  // single mode at x = 1/2 with G = 8: node j = 4
  GridField g = synthesize(f, 8);
  CHECK(g.v[3] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  SpectralField f2(1, 4);
  f2.at(2) = 1.0;
  GridField g2 = synthesize(f2, 8);
  // x = 1/4 is node j = 2; sin(2 pi / 4) = 1
  CHECK(g2.v[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  SpectralField z(2, 3);
  GridField gz = synthesize(z, 12);
  for (double v : gz.v) CHECK(v == 0.0);
}

TEST_CASE("analyze is the exact left inverse of synthesize") {
  std::mt19937 rng(7);
  for (int dim : {1, 2}) {
    const int n = dim == 1 ? 9 : 5;
    SpectralField f = random_field(dim, n, rng);
    for (int g : {n + 1, 2 * n, 4 * n}) {
      GridField grid = synthesize(f, g);
      SpectralField back = analyze(grid, n);
      for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(back.data()[i] == doctest::Approx(f.data()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("wavenumber G samples to zero at the nodes") {
  const int g = 12;
  GridField grid(1, g);
  for (int j = 1; j < g; ++j)
    grid.v[j - 1] = std::sin(g * kPi * j / g);  // identically 0 at nodes
  SpectralField c = analyze(grid, 6);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c.data()[i]) < 1e-12);
}

TEST_CASE("grid too small is rejected") {
  SpectralField f(1, 8);
  CHECK_THROWS(synthesize(f, 8));
  CHECK_NOTHROW(synthesize(f, 9));
}

TEST_CASE("cube of the first mode projects to 1.5 e1 - 0.5 e3") {
  const int n = 4;
  SpectralField e1(1, n);
  e1.at(1) = 1.0;
  GridField g = synthesize(e1, 4 * n);
  for (double& v : g.v) v = v * v * v;
  SpectralField c = analyze(g, n);
  CHECK(c.at(1) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(c.at(3) == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(std::abs(c.at(2)) < 1e-13);
  CHECK(std::abs(c.at(4)) < 1e-13);

  // cross-check mode 1 against adaptive quadrature of <e1^3, e_k>
  SpectralField e1w(1, n);
  e1w.at(1) = 1.0;
  const double q1 = oracle::mode_projection_1d(
      [&](double x) {
        const double u = oracle::eval_field(e1w, x);
        return u * u * u;
      },
      1);
  CHECK(c.at(1) == doctest::Approx(q1).epsilon(1e-12));
}

TEST_CASE("Parseval: L2 norm equals the coefficient norm") {
  std::mt19937 rng(11);
  for (int dim : {1, 2}) {
    SpectralField f = random_field(dim, 6, rng);
    double ss = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) ss += f.data()[i] * f.data()[i];
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(ss)).epsilon(1e-12));
  }
}

TEST_CASE("Sobolev norms of single modes") {
  SpectralField e1(1, 4);
  e1.at(1) = 1.0;
  CHECK(sobolev_norm(e1, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sobolev_norm(e1, 1.0) == doctest::Approx(kPi).epsilon(1e-14));

  SpectralField f(1, 4);
  f.at(2) = 2.0;
  CHECK(sobolev_norm(f, -1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));

  // homogeneity
  CHECK(sobolev_norm(f, 1.5) == doctest::Approx(2.0 * std::pow(4.0 * kPi * kPi, 0.75))
                                    .epsilon(1e-13));
}

TEST_CASE("projection truncates, is idempotent and nonexpansive") {
  std::mt19937 rng(3);
  SpectralField f = random_field(1, 8, rng);
  SpectralField p = project(f, 5);
  CHECK(p.n() == 5);
  for (int k = 1; k <= 5; ++k) CHECK(p.at(k) == f.at(k));
  SpectralField pp = project(p, 5);
  for (int k = 1; k <= 5; ++k) CHECK(pp.at(k) == p.at(k));
  for (double r : {-1.0, 0.0, 1.0, 2.0})
    CHECK(sobolev_norm(p, r) <= sobolev_norm(f, r) + 1e-15);

  SpectralField e3(1, 4);
  e3.at(3) = 1.0;
  SpectralField z = project(e3, 2);
  CHECK(sobolev_norm(z, 0.0) == 0.0);

  // 2D contraction
  SpectralField f2 = random_field(2, 6, rng);
  SpectralField p2 = project(f2, 3);
  for (double r : {-1.0, 0.0, 1.0, 2.0})
    CHECK(sobolev_norm(p2, r) <= sobolev_norm(f2, r) + 1e-15);
}

TEST_CASE("constant projection matches the analytic coefficients") {
  const int n = 6;
  SpectralField c1 = project_constant(1.0, 1, n);
  for (int k = 1; k <= n; ++k) {
    const double expect =
        k % 2 == 1 ? std::sqrt(2.0) * 2.0 / (k * kPi) : 0.0;
    CHECK(c1.at(k) == doctest::Approx(expect).epsilon(1e-14));
  }
  // and against quadrature of <1, e_k> (constants are not band-limited, so
  // the analytic route is the contract)
  const double q3 =
      oracle::mode_projection_1d([](double) { return 1.0; }, 3);
  CHECK(c1.at(3) == doctest::Approx(q3).epsilon(1e-11));

  SpectralField c2 = project_constant(2.0, 2, 4);
  CHECK(c2.at(1, 1) ==
        doctest::Approx(2.0 * 8.0 / (kPi * kPi)).epsilon(1e-13));
  CHECK(c2.at(1, 2) == 0.0);
  CHECK(c2.at(3, 3) ==
        doctest::Approx(2.0 * 8.0 / (9.0 * kPi * kPi)).epsilon(1e-13));
}
