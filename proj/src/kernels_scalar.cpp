#include <cstring>

#include "kernels_detail.hpp"
#include "swe/kernels.hpp"

namespace swe::kern::scalar {
namespace {

using namespace swe::kern::detail;

void matmul(double* c, const double* a, const double* b, std::size_t m,
            std::size_t k, std::size_t p) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * p;
    std::memset(ci, 0, p * sizeof(double));
    const double* ai = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double aik = ai[kk];
      const double* bk = b + kk * p;
      for (std::size_t j = 0; j < p; ++j) ci[j] = std::fma(aik, bk[j], ci[j]);
    }
  }
}

struct DotTerm {
  const double* x;
  const double* y;
  double a(std::size_t i) const { return x[i]; }
  double b(std::size_t i) const { return y[i]; }
};
struct SqTerm {
  const double* x;
  double a(std::size_t i) const { return x[i]; }
  double b(std::size_t i) const { return x[i]; }
};
struct WSqTerm {
  const double* w;
  const double* x;
  double a(std::size_t i) const { return w[i] * x[i]; }
  double b(std::size_t i) const { return x[i]; }
};

double dot(const double* x, const double* y, std::size_t n) {
  return lane4_reduce(n, DotTerm{x, y});
}

double sumsq(const double* x, std::size_t n) {
  return lane4_reduce(n, SqTerm{x});
}

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  return lane4_reduce(n, WSqTerm{w, x});
}

void matvec(double* y, const double* a, const double* x, std::size_t m,
            std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot(a + i * k, x, k);
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void poly_grid(double* out, const double* u, double c3, double c2, double c1,
               double c0, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = poly1(u[i], c3, c2, c1, c0);
}

void avf_grid(double* out, const double* a, const double* b, double c3,
              double c2, double c1, double c0, std::size_t n) {
  const double k3 = c3 * 0.25, k2 = c2 * (1.0 / 3.0), k1 = c1 * 0.5;
  for (std::size_t i = 0; i < n; ++i)
    out[i] = avf1(a[i], b[i], k3, k2, k1, c0);
}

void mul_grid(double* out, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void rot2(double* u, double* v, const double* a, const double* b,
          const double* c, const double* d, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i], vi = v[i];
    u[i] = rot2u(ui, vi, a[i], b[i]);
    v[i] = rot2v(ui, vi, c[i], d[i]);
  }
}

}  // namespace

const Ops ops = {matmul, matvec,   dot,      sumsq, weighted_sumsq,
                 axpy,   poly_grid, avf_grid, mul_grid, rot2};

}  // namespace swe::kern::scalar
