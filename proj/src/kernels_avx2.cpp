// AVX2+FMA variants. Compiled with -mavx2 -mfma on x86-64 only; selected at
// runtime when CPUID reports both features. Each kernel mirrors the scalar
// reference's fma chain per output element (see kernels_detail.hpp), so the
// two produce bitwise-identical results.

#include "swe/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#ifdef SWE_HAVE_AVX2

#include <immintrin.h>

#include <cstring>

#include "kernels_detail.hpp"

namespace swe::kern::avx2 {
namespace {

using namespace swe::kern::detail;

void matmul(double* c, const double* a, const double* b, std::size_t m,
            std::size_t k, std::size_t p) {
  const std::size_t p4 = p & ~std::size_t(3);
  std::size_t i = 0;
  // two C rows per pass share each streamed B row
  for (; i + 1 < m; i += 2) {
    double* c0 = c + i * p;
    double* c1 = c0 + p;
    std::memset(c0, 0, 2 * p * sizeof(double));
    const double* a0 = a + i * k;
    const double* a1 = a0 + k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const __m256d va0 = _mm256_set1_pd(a0[kk]);
      const __m256d va1 = _mm256_set1_pd(a1[kk]);
      const double* bk = b + kk * p;
      for (std::size_t j = 0; j < p4; j += 4) {
        const __m256d vb = _mm256_loadu_pd(bk + j);
        _mm256_storeu_pd(c0 + j, _mm256_fmadd_pd(va0, vb, _mm256_loadu_pd(c0 + j)));
        _mm256_storeu_pd(c1 + j, _mm256_fmadd_pd(va1, vb, _mm256_loadu_pd(c1 + j)));
      }
      for (std::size_t j = p4; j < p; ++j) {
        c0[j] = std::fma(a0[kk], bk[j], c0[j]);
        c1[j] = std::fma(a1[kk], bk[j], c1[j]);
      }
    }
  }
  for (; i < m; ++i) {
    double* ci = c + i * p;
    std::memset(ci, 0, p * sizeof(double));
    const double* ai = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const __m256d va = _mm256_set1_pd(ai[kk]);
      const double* bk = b + kk * p;
      for (std::size_t j = 0; j < p4; j += 4) {
        const __m256d vb = _mm256_loadu_pd(bk + j);
        _mm256_storeu_pd(ci + j, _mm256_fmadd_pd(va, vb, _mm256_loadu_pd(ci + j)));
      }
      for (std::size_t j = p4; j < p; ++j) ci[j] = std::fma(ai[kk], bk[j], ci[j]);
    }
  }
}

// Vector accumulator lanes match the scalar lane4 pattern: lane L holds the
// partial sum over indices i with i % 4 == L, tails included, combined as
// (l0+l2)+(l1+l3).
template <class LoadA, class LoadB>
double lane4_reduce_avx(std::size_t n, LoadA la, LoadB lb) {
  __m256d vacc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4)
    vacc = _mm256_fmadd_pd(la.vec(i), lb.vec(i), vacc);
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (std::size_t i = n4; i < n; ++i)
    acc[i - n4] = std::fma(la.at(i), lb.at(i), acc[i - n4]);
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

struct LoadPtr {
  const double* x;
  __m256d vec(std::size_t i) const { return _mm256_loadu_pd(x + i); }
  double at(std::size_t i) const { return x[i]; }
};
struct LoadWX {
  const double* w;
  const double* x;
  __m256d vec(std::size_t i) const {
    return _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
  }
  double at(std::size_t i) const { return w[i] * x[i]; }
};

double dot(const double* x, const double* y, std::size_t n) {
  return lane4_reduce_avx(n, LoadPtr{x}, LoadPtr{y});
}
double sumsq(const double* x, std::size_t n) {
  return lane4_reduce_avx(n, LoadPtr{x}, LoadPtr{x});
}
double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  return lane4_reduce_avx(n, LoadWX{w, x}, LoadPtr{x});
}

void matvec(double* y, const double* a, const double* x, std::size_t m,
            std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot(a + i * k, x, k);
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (std::size_t i = n4; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void poly_grid(double* out, const double* u, double c3, double c2, double c1,
               double c0, std::size_t n) {
  const __m256d v3 = _mm256_set1_pd(c3), v2 = _mm256_set1_pd(c2),
                v1 = _mm256_set1_pd(c1), v0 = _mm256_set1_pd(c0);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    __m256d t = _mm256_fmadd_pd(v3, vu, v2);
    t = _mm256_fmadd_pd(t, vu, v1);
    t = _mm256_fmadd_pd(t, vu, v0);
    _mm256_storeu_pd(out + i, t);
  }
  for (std::size_t i = n4; i < n; ++i) out[i] = poly1(u[i], c3, c2, c1, c0);
}

void avf_grid(double* out, const double* a, const double* b, double c3,
              double c2, double c1, double c0, std::size_t n) {
  const double k3 = c3 * 0.25, k2 = c2 * (1.0 / 3.0), k1 = c1 * 0.5;
  const __m256d v3 = _mm256_set1_pd(k3), v2 = _mm256_set1_pd(k2),
                v1 = _mm256_set1_pd(k1), v0 = _mm256_set1_pd(c0);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d s = _mm256_add_pd(va, vb);
    const __m256d aa = _mm256_mul_pd(va, va);
    const __m256d p2 = _mm256_fmadd_pd(vb, vb, aa);
    const __m256d ab = _mm256_mul_pd(va, vb);
    const __m256d q = _mm256_add_pd(p2, ab);
    const __m256d ps = _mm256_mul_pd(p2, s);
    __m256d t = _mm256_fmadd_pd(s, v1, v0);
    t = _mm256_fmadd_pd(q, v2, t);
    t = _mm256_fmadd_pd(ps, v3, t);
    _mm256_storeu_pd(out + i, t);
  }
  for (std::size_t i = n4; i < n; ++i)
    out[i] = avf1(a[i], b[i], k3, k2, k1, c0);
}

void mul_grid(double* out, const double* x, const double* y, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (std::size_t i = n4; i < n; ++i) out[i] = x[i] * y[i];
}

void rot2(double* u, double* v, const double* a, const double* b,
          const double* c, const double* d, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d nu = _mm256_fmadd_pd(_mm256_loadu_pd(b + i), vv,
                                       _mm256_mul_pd(_mm256_loadu_pd(a + i), vu));
    const __m256d nv = _mm256_fmadd_pd(_mm256_loadu_pd(d + i), vv,
                                       _mm256_mul_pd(_mm256_loadu_pd(c + i), vu));
    _mm256_storeu_pd(u + i, nu);
    _mm256_storeu_pd(v + i, nv);
  }
  for (std::size_t i = n4; i < n; ++i) {
    const double ui = u[i], vi = v[i];
    u[i] = rot2u(ui, vi, a[i], b[i]);
    v[i] = rot2v(ui, vi, c[i], d[i]);
  }
}

}  // namespace

const Ops ops = {matmul, matvec,   dot,      sumsq, weighted_sumsq,
                 axpy,   poly_grid, avf_grid, mul_grid, rot2};

}  // namespace swe::kern::avx2

#else  // !SWE_HAVE_AVX2

namespace swe::kern::avx2 {
const Ops ops = {nullptr, nullptr, nullptr, nullptr, nullptr,
                 nullptr, nullptr, nullptr, nullptr, nullptr};
}

#endif
#endif
