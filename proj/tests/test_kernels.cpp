#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "swe/kernels.hpp"

using namespace swe;

namespace {
std::vector<double> random_vec(std::size_t n, std::mt19937& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}
}  // namespace

TEST_CASE("scalar kernels match plain formulas") {
  const auto& ops = kern::scalar::ops;
  std::vector<double> x{1.0, 2.0, 3.0}, y{4.0, -1.0, 0.5};
  CHECK(ops.dot(x.data(), y.data(), 3) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(ops.sumsq(x.data(), 3) == doctest::Approx(14.0).epsilon(1e-15));
  std::vector<double> w{2.0, 0.5, 1.0};
  CHECK(ops.weighted_sumsq(w.data(), x.data(), 3) ==
        doctest::Approx(2.0 + 2.0 + 9.0).epsilon(1e-15));

  std::vector<double> out(3);
  ops.poly_grid(out.data(), x.data(), 1.0, 0.0, -1.0, 0.0, 3);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(6.0));
  CHECK(out[2] == doctest::Approx(24.0));

  // 2x2 matmul
  std::vector<double> a{1.0, 2.0, 3.0, 4.0}, b{5.0, 6.0, 7.0, 8.0}, c(4);
  ops.matmul(c.data(), a.data(), b.data(), 2, 2, 2);
  CHECK(c[0] == doctest::Approx(19.0));
  CHECK(c[1] == doctest::Approx(22.0));
  CHECK(c[2] == doctest::Approx(43.0));
  CHECK(c[3] == doctest::Approx(50.0));
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 kernels are bitwise identical to the scalar reference") {
  if (!kern::avx2_available()) {
    MESSAGE("AVX2 not available on this host, skipping");
    return;
  }
  const auto& s = kern::scalar::ops;
  const auto& v = kern::avx2::ops;
  std::mt19937 rng(123);

  // sizes straddle the 4-lane boundary, including tails
  for (std::size_t n : {1u, 3u, 4u, 7u, 63u, 255u, 256u, 1000u}) {
    auto x = random_vec(n, rng), y = random_vec(n, rng), w = random_vec(n, rng);
    for (auto& e : w) e = std::abs(e);

    CHECK(s.dot(x.data(), y.data(), n) == v.dot(x.data(), y.data(), n));
    CHECK(s.sumsq(x.data(), n) == v.sumsq(x.data(), n));
    CHECK(s.weighted_sumsq(w.data(), x.data(), n) ==
          v.weighted_sumsq(w.data(), x.data(), n));

    std::vector<double> o1(n), o2(n);
    s.poly_grid(o1.data(), x.data(), 0.7, -0.3, 1.1, 0.2, n);
    v.poly_grid(o2.data(), x.data(), 0.7, -0.3, 1.1, 0.2, n);
    CHECK(bitwise_equal(o1, o2));

    s.avf_grid(o1.data(), x.data(), y.data(), 1.0, 0.4, -1.0, 0.1, n);
    v.avf_grid(o2.data(), x.data(), y.data(), 1.0, 0.4, -1.0, 0.1, n);
    CHECK(bitwise_equal(o1, o2));

    s.mul_grid(o1.data(), x.data(), y.data(), n);
    v.mul_grid(o2.data(), x.data(), y.data(), n);
    CHECK(bitwise_equal(o1, o2));

    auto y1 = y, y2 = y;
    s.axpy(y1.data(), 0.37, x.data(), n);
    v.axpy(y2.data(), 0.37, x.data(), n);
    CHECK(bitwise_equal(y1, y2));

    auto u1 = x, u2 = x, w1 = y, w2 = y;
    auto ca = random_vec(n, rng), cb = random_vec(n, rng), cc = random_vec(n, rng),
         cd = random_vec(n, rng);
    s.rot2(u1.data(), w1.data(), ca.data(), cb.data(), cc.data(), cd.data(), n);
    v.rot2(u2.data(), w2.data(), ca.data(), cb.data(), cc.data(), cd.data(), n);
    CHECK(bitwise_equal(u1, u2));
    CHECK(bitwise_equal(w1, w2));
  }

  // matmul and matvec across odd shapes
  const int shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {16, 16, 63}, {63, 16, 63}, {17, 31, 5}};
  for (const auto& shape : shapes) {
    const int m = shape[0], k = shape[1], p = shape[2];
    auto a = random_vec(static_cast<std::size_t>(m) * k, rng);
    auto b = random_vec(static_cast<std::size_t>(k) * p, rng);
    std::vector<double> c1(static_cast<std::size_t>(m) * p),
        c2(static_cast<std::size_t>(m) * p);
    s.matmul(c1.data(), a.data(), b.data(), m, k, p);
    v.matmul(c2.data(), a.data(), b.data(), m, k, p);
    CHECK(bitwise_equal(c1, c2));

    auto xv = random_vec(static_cast<std::size_t>(k), rng);
    std::vector<double> y1(static_cast<std::size_t>(m)), y2(y1);
    s.matvec(y1.data(), a.data(), xv.data(), m, k);
    v.matvec(y2.data(), a.data(), xv.data(), m, k);
    CHECK(bitwise_equal(y1, y2));
  }
}
#endif

TEST_CASE("dispatch honors the environment override") {
  // whichever path is active, it must be one of the two published ones
  const std::string name = kern::active_name();
  CHECK((name == "scalar" || name == "avx2"));
}
