#pragma once

#include "swe/field.hpp"
#include "swe/polynomial.hpp"
#include "swe/spectral.hpp"

namespace swe {

// The cubic of a degree-N sine polynomial paired with a retained mode carries
// wavenumbers up to 4N, and the interior rectangle rule on G points per
// dimension integrates endpoint-vanishing sine products exactly as long as no
// wavenumber is a nonzero multiple of 2G. G = 4N therefore projects the
// nonlinear terms without aliasing, not just approximately.
inline int dealiased_grid(int n) { return 4 * n; }

// P_N f(u), computed as synthesize -> pointwise f -> analyze.
SpectralField galerkin_f(const CubicPolynomial& p, const SpectralField& u);

// P_N of the chord average of f between fields a and b; reduces to
// galerkin_f(a) when b == a. Wavenumber content <= 3N keeps G = 4N exact.
SpectralField galerkin_avf(const CubicPolynomial& p, const SpectralField& a,
                           const SpectralField& b);

// F(u) = integral of density(u(x)) over (0,1)^d by the same G = 4N rectangle
// rule; sharing the grid with galerkin_avf is what makes the discrete
// gradient identity <avf(a,b), b-a> = F(b) - F(a) hold at machine precision.
double potential_integral(const CubicPolynomial& p, const SpectralField& u);

}  // namespace swe
