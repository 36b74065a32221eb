#pragma once

#include <cmath>
#include <cstddef>

// Per-element helpers shared by the scalar kernels and the vector kernels'
// tail handling. The fma order here is the contract: the AVX2 variants run
// the same chain lane-wise, which is what makes the two paths bit-identical.

namespace swe::kern::detail {

inline double poly1(double u, double c3, double c2, double c1, double c0) {
  double t = std::fma(c3, u, c2);
  t = std::fma(t, u, c1);
  return std::fma(t, u, c0);
}

inline double avf1(double a, double b, double k3, double k2, double k1,
                   double c0) {
  // k3 = c3/4, k2 = c2/3, k1 = c1/2 are pre-divided by the caller.
  const double s = a + b;
  const double aa = a * a;
  const double p2 = std::fma(b, b, aa);  // a^2 + b^2
  const double ab = a * b;
  const double q = p2 + ab;              // a^2 + ab + b^2
  const double ps = p2 * s;              // (a^2+b^2)(a+b)
  double t = std::fma(s, k1, c0);
  t = std::fma(q, k2, t);
  return std::fma(ps, k3, t);
}

inline double rot2u(double u, double v, double a, double b) {
  return std::fma(b, v, a * u);
}

inline double rot2v(double u, double v, double c, double d) {
  return std::fma(d, v, c * u);
}

// Reductions use four independent accumulators combined as
// (acc0+acc2)+(acc1+acc3); the AVX2 versions keep the same lanes so the
// rounding sequence matches exactly.
template <class F>
inline double lane4_reduce(std::size_t n, F term) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] = std::fma(term.a(i + 0), term.b(i + 0), acc[0]);
    acc[1] = std::fma(term.a(i + 1), term.b(i + 1), acc[1]);
    acc[2] = std::fma(term.a(i + 2), term.b(i + 2), acc[2]);
    acc[3] = std::fma(term.a(i + 3), term.b(i + 3), acc[3]);
  }
  for (std::size_t i = n4; i < n; ++i)
    acc[i - n4] = std::fma(term.a(i), term.b(i), acc[i - n4]);
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

}  // namespace swe::kern::detail
