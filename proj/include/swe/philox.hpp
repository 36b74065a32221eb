#pragma once

#include <cmath>
#include <cstdint>

namespace swe {

// Philox4x32-10 counter block cipher. Stateless: every draw is a pure
// function of (key, counter), which is what makes trajectory-parallel
// sampling order-independent.
struct Philox4x32 {
  static inline void round(std::uint32_t c[4], std::uint32_t k0,
                           std::uint32_t k1) {
    const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
    const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    c[0] = hi1 ^ c[1] ^ k0;
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k1;
    c[3] = lo0;
  }

  static inline void block(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
                           std::uint32_t c2, std::uint32_t c3,
                           std::uint32_t out[4]) {
    std::uint32_t k0 = std::uint32_t(key);
    std::uint32_t k1 = std::uint32_t(key >> 32);
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
      }
      round(out, k0, k1);
    }
  }
};

// Standard normal from one Philox block via Box-Muller:
//   u1 = (x0 | x1<<32 + 1) * 2^-64 in (0,1],  u2 = (x2 | x3<<32) * 2^-64,
//   z  = sqrt(-2 ln u1) * cos(2 pi u2).
// The second Box-Muller output is discarded; each (key, counter) yields one
// draw so streams are indexable without carry-over state.
inline double philox_normal(std::uint64_t key, std::uint32_t c0,
                            std::uint32_t c1, std::uint32_t c2,
                            std::uint32_t c3) {
  std::uint32_t x[4];
  Philox4x32::block(key, c0, c1, c2, c3, x);
  const std::uint64_t a = (std::uint64_t(x[1]) << 32) | x[0];
  const std::uint64_t b = (std::uint64_t(x[3]) << 32) | x[2];
  constexpr double k2_64 = 5.421010862427522e-20;  // 2^-64
  const double u1 = (static_cast<double>(a) + 1.0) * k2_64;
  const double u2 = static_cast<double>(b) * k2_64;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925287 * u2);
}

}  // namespace swe
