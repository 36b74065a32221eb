#pragma once

#include <cstddef>

// Data-parallel inner loops used by the transforms, the integrator and the
// observables. Every kernel exists in a scalar reference version and, on
// x86-64 with AVX2+FMA, a vectorized version. Both variants perform the
// same fused-multiply-add chain per output element in the same order, so
// their results are bitwise identical; the equivalence test asserts this.
//
// Dispatch is resolved once at startup from CPUID; set SWE_KERNELS=scalar
// in the environment to force the reference path.

namespace swe::kern {

struct Ops {
  // C[M x P] = A[M x K] * B[K x P], row major, C overwritten.
  void (*matmul)(double* c, const double* a, const double* b, std::size_t m,
                 std::size_t k, std::size_t p);
  // y[M] = A[M x K] * x[K]
  void (*matvec)(double* y, const double* a, const double* x, std::size_t m,
                 std::size_t k);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sumsq)(const double* x, std::size_t n);
  // sum_i w[i] * x[i]^2
  double (*weighted_sumsq)(const double* w, const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // out = ((c3*u + c2)*u + c1)*u + c0, elementwise
  void (*poly_grid)(double* out, const double* u, double c3, double c2,
                    double c1, double c0, std::size_t n);
  // out = chord average of the cubic between grids a and b:
  //   c3*(a^2+b^2)(a+b)/4 + c2*(a^2+ab+b^2)/3 + c1*(a+b)/2 + c0
  void (*avf_grid)(double* out, const double* a, const double* b, double c3,
                   double c2, double c1, double c0, std::size_t n);
  // out = x .* y
  void (*mul_grid)(double* out, const double* x, const double* y,
                   std::size_t n);
  // (u, v) <- (a.*u + b.*v, c.*u + d.*v) with per-element coefficients
  void (*rot2)(double* u, double* v, const double* a, const double* b,
               const double* c, const double* d, std::size_t n);
};

namespace scalar {
extern const Ops ops;
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const Ops ops;  // null-initialized when built without AVX2 support
}
#endif

// Selected implementation (CPUID probe + SWE_KERNELS override).
const Ops& ops();
const char* active_name();
bool avx2_available();

}  // namespace swe::kern
