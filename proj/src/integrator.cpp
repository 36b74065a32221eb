#include "swe/integrator.hpp"

#include <cmath>
#include <cstring>

#include "swe/kernels.hpp"
#include "swe/nonlinearity.hpp"
#include "swe/spectral.hpp"

namespace swe {

double SchemeConfig::effective_epsilon() const {
  return epsilon > 0.0 ? epsilon : std::pow(h, 0.25);
}

void SchemeConfig::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  if (n < 1) throw std::invalid_argument("truncation must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(effective_epsilon() > 0.0))
    throw std::invalid_argument("epsilon must be positive");
}

CayleyFactor::Entries CayleyFactor::entries(double lambda, double h) {
  const double m = 1.0 + lambda * h * h / 4.0;
  return {m, 2.0 / m - 1.0, h / m, -lambda * h / m, 2.0 / m - 1.0};
}

CayleyFactor::CayleyFactor(int dim_, int n_, double h_)
    : dim(dim_), n(n_), h(h_) {
  const auto& lam = eigenvalue_table(dim, n);
  const std::size_t sz = lam.size();
  a.resize(sz);
  b.resize(sz);
  c.resize(sz);
  d.resize(sz);
  minv.resize(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    const auto e = entries(lam[i], h);
    a[i] = e.a;
    b[i] = e.b;
    c[i] = e.c;
    d[i] = e.d;
    minv[i] = 1.0 / e.m;
  }
}

void cayley_step_inplace(PhaseState& x, const CayleyFactor& f) {
  kern::ops().rot2(x.u.data(), x.v.data(), f.a.data(), f.b.data(), f.c.data(),
                   f.d.data(), x.u.size());
}

PhaseState cayley_step(const PhaseState& x, double h) {
  PhaseState out = x;
  CayleyFactor f(x.dim(), x.n(), h);
  cayley_step_inplace(out, f);
  return out;
}

PhaseState exact_group(const PhaseState& x, double t) {
  const auto& lam = eigenvalue_table(x.dim(), x.n());
  const std::size_t sz = lam.size();
  std::vector<double> a(sz), b(sz), c(sz), d(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    const double w = std::sqrt(lam[i]);
    const double cs = std::cos(w * t), sn = std::sin(w * t);
    a[i] = cs;
    b[i] = sn / w;
    c[i] = -w * sn;
    d[i] = cs;
  }
  PhaseState out = x;
  kern::ops().rot2(out.u.data(), out.v.data(), a.data(), b.data(), c.data(),
                   d.data(), sz);
  return out;
}

PhaseState apply_b_inverse(const PhaseState& x, double h) {
  const auto& lam = eigenvalue_table(x.dim(), x.n());
  const std::size_t sz = lam.size();
  std::vector<double> a(sz), b(sz), c(sz), d(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    const double mi = 1.0 / (1.0 + lam[i] * h * h / 4.0);
    a[i] = mi;
    b[i] = mi * h / 2.0;
    c[i] = -mi * lam[i] * h / 2.0;
    d[i] = mi;
  }
  PhaseState out = x;
  kern::ops().rot2(out.u.data(), out.v.data(), a.data(), b.data(), c.data(),
                   d.data(), sz);
  return out;
}

namespace {

// Buffers and tables for repeated implicit substeps at fixed (dim, n, h).
struct AvfWorkspace {
  int dim, n;
  double h;
  CubicPolynomial poly;
  std::shared_ptr<const SineTransform> plan;
  std::vector<double> minv;    // 1/(1 + lambda h^2/4)
  std::vector<double> lam;     // eigenvalues
  std::vector<double> invlam;  // 1/lambda, stopping metric weights
  bool poly_zero;
  bool has_even;  // c2 or c0 nonzero: frozen constant part present

  // grids, all sized (4n-1)^dim
  GridField gu_m, gu_k, gw, gq, gs, gnl;
  // spectra
  SpectralField rhs, w, nl_hat, s_hat, u_next, v_bar, u_prev, v_prev, diff;

  AvfWorkspace(int dim_, int n_, double h_, const CubicPolynomial& p)
      : dim(dim_), n(n_), h(h_), poly(p) {
    plan = transform_plan(dim, n, dealiased_grid(n));
    lam = eigenvalue_table(dim, n);
    const std::size_t sz = lam.size();
    minv.resize(sz);
    invlam.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) {
      minv[i] = 1.0 / (1.0 + lam[i] * h * h / 4.0);
      invlam[i] = 1.0 / lam[i];
    }
    poly_zero = p.c3 == 0.0 && p.c2 == 0.0 && p.c1 == 0.0 && p.c0 == 0.0;
    has_even = p.c2 != 0.0 || p.c0 != 0.0;
    const int g = dealiased_grid(n);
    gu_m = GridField(dim, g);
    gu_k = gu_m;
    gw = gu_m;
    gq = gu_m;
    gs = gu_m;
    gnl = gu_m;
    rhs = SpectralField(dim, n);
    w = rhs;
    nl_hat = rhs;
    s_hat = rhs;
    u_next = rhs;
    v_bar = rhs;
    u_prev = rhs;
    v_prev = rhs;
    diff = rhs;
  }
};

double weighted_dist(const kern::Ops& ops, const SpectralField& a,
                     const SpectralField& b, const double* wgt,
                     SpectralField& scratch) {
  const std::size_t sz = a.size();
  std::memcpy(scratch.data(), a.data(), sz * sizeof(double));
  ops.axpy(scratch.data(), -1.0, b.data(), sz);
  if (!wgt) return std::sqrt(ops.sumsq(scratch.data(), sz));
  return std::sqrt(ops.weighted_sumsq(wgt, scratch.data(), sz));
}

// One deterministic substep on the workspace. Fills ws.u_next / ws.v_bar.
DetStepResult det_step(AvfWorkspace& ws, const SpectralField& u_m,
                       const SpectralField& v_m, const SchemeConfig& cfg,
                       bool keep_history) {
  const auto& ops = kern::ops();
  const std::size_t sz = u_m.size();
  const std::size_t gsz = ws.gu_m.size();
  const double h = ws.h;
  const double q2 = h * h / 4.0;

  // rhs = u_m + (h/2) v_m
  std::memcpy(ws.rhs.data(), u_m.data(), sz * sizeof(double));
  ops.axpy(ws.rhs.data(), 0.5 * h, v_m.data(), sz);

  DetStepResult res;
  res.u_next = SpectralField(ws.dim, ws.n);
  res.v_bar = SpectralField(ws.dim, ws.n);

  if (ws.poly_zero) {
    // linear reduction: the substep is exactly the Cayley map
    for (std::size_t i = 0; i < sz; ++i) ws.w.data()[i] = ws.minv[i] * ws.rhs.data()[i];
    for (std::size_t i = 0; i < sz; ++i)
      res.u_next.data()[i] = 2.0 * ws.w.data()[i] - u_m.data()[i];
    for (std::size_t i = 0; i < sz; ++i)
      res.v_bar.data()[i] = v_m.data()[i] - h * ws.lam[i] * ws.w.data()[i];
    res.iterations = 1;
    return res;
  }

  ws.plan->synthesize(u_m, ws.gu_m);
  std::memcpy(ws.gu_k.v.data(), ws.gu_m.v.data(), gsz * sizeof(double));
  const double um_h1 = std::sqrt(ops.weighted_sumsq(ws.lam.data(), u_m.data(), sz));

  // iterate state
  std::memcpy(ws.w.data(), u_m.data(), sz * sizeof(double));
  std::memcpy(ws.u_prev.data(), u_m.data(), sz * sizeof(double));
  std::memcpy(ws.v_prev.data(), v_m.data(), sz * sizeof(double));

  const double tol = cfg.tol;
  const double inner_tol = tol * 1e-2;
  const double inv_eps = 1.0 / cfg.effective_epsilon();
  const bool tamed = cfg.solver == Solver::iteration2;
  double dist = 0.0;

  for (int k = 0; k < cfg.max_iter; ++k) {
    // frozen grids from the previous iterate u_k (gu_k) and u_m (gu_m):
    //   q = c3 (u_k^2 + u_m^2)/2 + c1   (multiplies the new midpoint)
    //   s = c2 (u_k^2 + u_k u_m + u_m^2)/3 + c0
    bool chi = true;
    if (tamed) {
      const double uk_h1 =
          k == 0 ? um_h1
                 : std::sqrt(ops.weighted_sumsq(ws.lam.data(), ws.u_prev.data(), sz));
      chi = uk_h1 + um_h1 <= inv_eps;
      if (!chi) res.taming_fired = true;
    }
    const double* a = ws.gu_k.v.data();
    const double* b = ws.gu_m.v.data();
    if (chi) {
      double* q = ws.gq.v.data();
      for (std::size_t i = 0; i < gsz; ++i)
        q[i] = ws.poly.c3 * 0.5 * (a[i] * a[i] + b[i] * b[i]) + ws.poly.c1;
      if (ws.has_even) {
        double* s = ws.gs.v.data();
        for (std::size_t i = 0; i < gsz; ++i)
          s[i] = ws.poly.c2 * (1.0 / 3.0) *
                     (a[i] * a[i] + a[i] * b[i] + b[i] * b[i]) +
                 ws.poly.c0;
        ws.plan->analyze(ws.gs, ws.s_hat);
      }
    }

    // inner sweep: w <- Minv (rhs - (h^2/4)(P_N(q w) + s_hat))
    int inner = 0;
    for (; inner < 60; ++inner) {
      if (!chi) {
        for (std::size_t i = 0; i < sz; ++i)
          ws.nl_hat.data()[i] = 0.0;
      } else {
        ws.plan->synthesize(ws.w, ws.gw);
        ops.mul_grid(ws.gnl.v.data(), ws.gq.v.data(), ws.gw.v.data(), gsz);
        ws.plan->analyze(ws.gnl, ws.nl_hat);
        if (ws.has_even)
          ops.axpy(ws.nl_hat.data(), 1.0, ws.s_hat.data(), sz);
      }
      double delta2 = 0.0;
      for (std::size_t i = 0; i < sz; ++i) {
        const double wn = ws.minv[i] * (ws.rhs.data()[i] - q2 * ws.nl_hat.data()[i]);
        const double d = wn - ws.w.data()[i];
        delta2 += d * d;
        ws.w.data()[i] = wn;
      }
      if (!chi || std::sqrt(delta2) <= inner_tol) break;
    }

    // unpack; the pair (w, nl_hat) keeps the first equation exact
    for (std::size_t i = 0; i < sz; ++i)
      res.u_next.data()[i] = 2.0 * ws.w.data()[i] - u_m.data()[i];
    for (std::size_t i = 0; i < sz; ++i)
      res.v_bar.data()[i] = v_m.data()[i] - h * ws.lam[i] * ws.w.data()[i] -
                            h * ws.nl_hat.data()[i];

    dist = weighted_dist(ops, res.u_next, ws.u_prev, nullptr, ws.diff) +
           weighted_dist(ops, res.v_bar, ws.v_prev, ws.invlam.data(), ws.diff);
    if (keep_history) res.distances.push_back(dist);
    res.iterations = k + 1;
    if (dist < tol) {
      res.final_distance = dist;
      return res;
    }
    std::memcpy(ws.u_prev.data(), res.u_next.data(), sz * sizeof(double));
    std::memcpy(ws.v_prev.data(), res.v_bar.data(), sz * sizeof(double));
    // grid of the new iterate for the next frozen factor
    ws.plan->synthesize(ws.w, ws.gw);
    double* gk = ws.gu_k.v.data();
    const double* gw = ws.gw.v.data();
    const double* gm = ws.gu_m.v.data();
    for (std::size_t i = 0; i < gsz; ++i) gk[i] = 2.0 * gw[i] - gm[i];
  }

  throw SolverError(
      "implicit substep did not converge in " + std::to_string(cfg.max_iter) +
          " iterations (distance " + std::to_string(dist) +
          "); the step size is too large for this state",
      dist, cfg.max_iter);
}

}  // namespace

DetStepResult avf_det_step(const PhaseState& x, const SchemeConfig& cfg,
                           const CubicPolynomial& poly, bool keep_history) {
  cfg.validate();
  if (x.n() != cfg.n)
    throw std::invalid_argument("state truncation does not match config");
  AvfWorkspace ws(x.dim(), x.n(), cfg.h, poly);
  return det_step(ws, x.u, x.v, cfg, keep_history);
}

PhaseState stochastic_kick(const SpectralField& u, const SpectralField& v_bar,
                           const SpectralField& increment) {
  PhaseState out(u, v_bar);
  const SpectralField* inc = &increment;
  SpectralField projected;
  if (increment.n() != u.n() || increment.dim() != u.dim()) {
    if (increment.dim() != u.dim())
      throw std::invalid_argument("increment dimension mismatch");
    projected = project(increment, u.n());
    inc = &projected;
  }
  kern::ops().axpy(out.v.data(), 1.0, inc->data(), out.v.size());
  return out;
}

std::pair<double, double> avf_residual(const PhaseState& x,
                                       const SpectralField& u_next,
                                       const SpectralField& v_bar, double h,
                                       const CubicPolynomial& poly) {
  const auto& ops = kern::ops();
  const std::size_t sz = x.u.size();
  const auto& lam = eigenvalue_table(x.dim(), x.n());

  SpectralField r1 = u_next;
  ops.axpy(r1.data(), -1.0, x.u.data(), sz);
  ops.axpy(r1.data(), -0.5 * h, v_bar.data(), sz);
  ops.axpy(r1.data(), -0.5 * h, x.v.data(), sz);

  SpectralField avg = galerkin_avf(poly, x.u, u_next);
  SpectralField r2 = v_bar;
  ops.axpy(r2.data(), -1.0, x.v.data(), sz);
  for (std::size_t i = 0; i < sz; ++i)
    r2.data()[i] += 0.5 * h * lam[i] * (x.u.data()[i] + u_next.data()[i]);
  ops.axpy(r2.data(), h, avg.data(), sz);

  std::vector<double> invlam(sz);
  for (std::size_t i = 0; i < sz; ++i) invlam[i] = 1.0 / lam[i];
  return {std::sqrt(ops.sumsq(r1.data(), sz)),
          std::sqrt(ops.weighted_sumsq(invlam.data(), r2.data(), sz))};
}

TrajectoryRecord integrate(const PhaseState& x0, const SchemeConfig& cfg,
                           const CubicPolynomial& poly, const NoiseFn& noise,
                           const std::vector<std::int64_t>& sample_steps) {
  cfg.validate();
  if (x0.n() != cfg.n)
    throw std::invalid_argument("initial state truncation does not match config");
  const double steps_f = cfg.T / cfg.h;
  const auto m_steps = static_cast<std::int64_t>(std::llround(steps_f));
  if (m_steps < 1 || std::abs(steps_f - static_cast<double>(m_steps)) > 1e-9)
    throw std::invalid_argument("horizon must be an integer number of steps");

  TrajectoryRecord rec;
  rec.steps = m_steps;
  const int d = x0.dim();
  rec.guard_it1_exceeded =
      cfg.h * cfg.h * std::pow(max_eigenvalue(d, cfg.n), d / 3.0) > cfg.guard_it1;
  rec.guard_it2_exceeded =
      cfg.solver == Solver::iteration2 &&
      cfg.h / std::pow(cfg.effective_epsilon(), 4.0) > cfg.guard_it2;

  AvfWorkspace ws(d, cfg.n, cfg.h, poly);
  PhaseState x = x0;
  std::size_t next_sample = 0;
  auto maybe_sample = [&](std::int64_t m) {
    while (next_sample < sample_steps.size() && sample_steps[next_sample] == m) {
      rec.times.push_back(static_cast<double>(m) * cfg.h);
      rec.states.push_back(x);
      ++next_sample;
    }
  };
  maybe_sample(0);

  for (std::int64_t m = 0; m < m_steps; ++m) {
    DetStepResult step;
    try {
      step = det_step(ws, x.u, x.v, cfg, false);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(m) + ": " + e.what(),
                        e.final_distance, e.iterations);
    }
    rec.iterations.push_back(step.iterations);
    rec.max_iterations = std::max(rec.max_iterations, step.iterations);
    rec.taming_fired = rec.taming_fired || step.taming_fired;
    if (noise) {
      x = stochastic_kick(step.u_next, step.v_bar, noise(m));
    } else {
      x.u = std::move(step.u_next);
      x.v = std::move(step.v_bar);
    }
    maybe_sample(m + 1);
  }
  return rec;
}

}  // namespace swe
