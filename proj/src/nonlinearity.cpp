#include "swe/nonlinearity.hpp"

#include <stdexcept>

#include "swe/kernels.hpp"

namespace swe {

SpectralField galerkin_f(const CubicPolynomial& p, const SpectralField& u) {
  const int g = dealiased_grid(u.n());
  auto plan = transform_plan(u.dim(), u.n(), g);
  GridField grid = plan->synthesize(u);
  kern::ops().poly_grid(grid.v.data(), grid.v.data(), p.c3, p.c2, p.c1, p.c0,
                        grid.size());
  SpectralField out(u.dim(), u.n());
  plan->analyze(grid, out);
  return out;
}

SpectralField galerkin_avf(const CubicPolynomial& p, const SpectralField& a,
                           const SpectralField& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("chord endpoints must share dim and truncation");
  const int g = dealiased_grid(a.n());
  auto plan = transform_plan(a.dim(), a.n(), g);
  GridField ga = plan->synthesize(a);
  GridField gb = plan->synthesize(b);
  kern::ops().avf_grid(ga.v.data(), ga.v.data(), gb.v.data(), p.c3, p.c2, p.c1,
                       p.c0, ga.size());
  SpectralField out(a.dim(), a.n());
  plan->analyze(ga, out);
  return out;
}

double potential_integral(const CubicPolynomial& p, const SpectralField& u) {
  const int g = dealiased_grid(u.n());
  auto plan = transform_plan(u.dim(), u.n(), g);
  GridField grid = plan->synthesize(u);
  const double* x = grid.v.data();
  // lane pattern matches the reduction kernels so reruns are bit-stable
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) acc[i % 4] += p.density(x[i]);
  const double sum = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  const double w = (u.dim() == 1) ? 1.0 / g : 1.0 / (static_cast<double>(g) * g);
  return sum * w;
}

}  // namespace swe
