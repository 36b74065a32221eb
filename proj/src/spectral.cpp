#include "swe/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "swe/kernels.hpp"

namespace swe {

double eigenvalue(const ModeIndex& m, int dim) {
  if (m.k < 1 || (dim == 2 && m.l < 1))
    throw std::invalid_argument("mode components must be >= 1");
  const double k2 = static_cast<double>(m.k) * m.k;
  if (dim == 1) return kPi * kPi * k2;
  return kPi * kPi * (k2 + static_cast<double>(m.l) * m.l);
}

const std::vector<double>& eigenvalue_table(int dim, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& tab = cache[{dim, n}];
  if (tab.empty()) {
    tab.resize(static_cast<std::size_t>(SpectralField::size_for(dim, n)));
    if (dim == 1) {
      for (int k = 1; k <= n; ++k) tab[k - 1] = eigenvalue({k, 1}, 1);
    } else {
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          tab[static_cast<std::size_t>(k - 1) * n + (l - 1)] =
              eigenvalue({k, l}, 2);
    }
  }
  return tab;
}

double max_eigenvalue(int dim, int n) {
  return kPi * kPi * dim * static_cast<double>(n) * n;
}

double sobolev_norm(const SpectralField& f, double r) {
  const auto& ops = kern::ops();
  if (r == 0.0) return std::sqrt(ops.sumsq(f.data(), f.size()));
  const auto& lam = eigenvalue_table(f.dim(), f.n());
  // integer exponents cover every norm on the hot paths
  std::vector<double> w(lam.size());
  if (r == 1.0) {
    w = lam;
  } else if (r == -1.0) {
    for (std::size_t i = 0; i < lam.size(); ++i) w[i] = 1.0 / lam[i];
  } else if (r == 2.0) {
    for (std::size_t i = 0; i < lam.size(); ++i) w[i] = lam[i] * lam[i];
  } else {
    for (std::size_t i = 0; i < lam.size(); ++i) w[i] = std::pow(lam[i], r);
  }
  return std::sqrt(ops.weighted_sumsq(w.data(), f.data(), f.size()));
}

double phase_norm(const PhaseState& x, double r) {
  const double a = sobolev_norm(x.u, r);
  const double b = sobolev_norm(x.v, r - 1.0);
  return std::sqrt(a * a + b * b);
}

SpectralField project(const SpectralField& f, int n_out) {
  if (n_out < 1) throw std::invalid_argument("projection truncation must be >= 1");
  SpectralField out(f.dim(), n_out);
  const int m = std::min(f.n(), n_out);
  if (f.dim() == 1) {
    for (int k = 1; k <= m; ++k) out.at(k) = f.at(k);
  } else {
    for (int k = 1; k <= m; ++k)
      for (int l = 1; l <= m; ++l) out.at(k, l) = f.at(k, l);
  }
  return out;
}

SpectralField project_constant(double value, int dim, int n) {
  SpectralField out(dim, n);
  std::vector<double> c1(n);
  const double s2 = std::sqrt(2.0);
  for (int k = 1; k <= n; ++k)
    c1[k - 1] = (k % 2 == 1) ? 2.0 * s2 / (k * kPi) : 0.0;
  if (dim == 1) {
    for (int k = 1; k <= n; ++k) out.at(k) = value * c1[k - 1];
  } else {
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) out.at(k, l) = value * c1[k - 1] * c1[l - 1];
  }
  return out;
}

SineTransform::SineTransform(int dim, int n, int g) : dim_(dim), n_(n), g_(g) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (g < n + 1)
    throw std::invalid_argument("collocation grid too small: need G >= N+1");
  const int rows = g - 1;
  syn_.resize(static_cast<std::size_t>(rows) * n);
  syn_t_.resize(syn_.size());
  ana_.resize(syn_.size());
  ana_t_.resize(syn_.size());
  const double s2 = std::sqrt(2.0);
  for (int j = 1; j <= rows; ++j)
    for (int k = 1; k <= n; ++k) {
      const double v = s2 * std::sin(k * kPi * j / g);
      syn_[static_cast<std::size_t>(j - 1) * n + (k - 1)] = v;
      syn_t_[static_cast<std::size_t>(k - 1) * rows + (j - 1)] = v;
      ana_[static_cast<std::size_t>(j - 1) * n + (k - 1)] = v / g;
      ana_t_[static_cast<std::size_t>(k - 1) * rows + (j - 1)] = v / g;
    }
}

void SineTransform::synthesize(const SpectralField& f, GridField& out) const {
  if (f.dim() != dim_ || f.n() != n_)
    throw std::invalid_argument("field shape does not match transform plan");
  const auto& ops = kern::ops();
  const int rows = g_ - 1;
  out.dim = dim_;
  out.g = g_;
  if (dim_ == 1) {
    out.v.resize(static_cast<std::size_t>(rows));
    ops.matvec(out.v.data(), syn_.data(), f.data(), rows, n_);
  } else {
    out.v.resize(static_cast<std::size_t>(rows) * rows);
    std::vector<double> tmp(static_cast<std::size_t>(n_) * rows);
    // grid = Syn * U * Syn^T, evaluated as (U * Syn^T) then Syn * (.)
    ops.matmul(tmp.data(), f.data(), syn_t_.data(), n_, n_, rows);
    ops.matmul(out.v.data(), syn_.data(), tmp.data(), rows, n_, rows);
  }
}

void SineTransform::analyze(const GridField& grid, SpectralField& out) const {
  if (grid.dim != dim_ || grid.g != g_)
    throw std::invalid_argument("grid shape does not match transform plan");
  const auto& ops = kern::ops();
  const int rows = g_ - 1;
  out = SpectralField(dim_, n_);
  if (dim_ == 1) {
    ops.matvec(out.data(), ana_t_.data(), grid.v.data(), n_, rows);
  } else {
    std::vector<double> tmp(static_cast<std::size_t>(n_) * rows);
    // U = Ana^T * grid * Ana
    ops.matmul(tmp.data(), ana_t_.data(), grid.v.data(), n_, rows, rows);
    ops.matmul(out.data(), tmp.data(), ana_.data(), n_, rows, n_);
  }
}

GridField SineTransform::synthesize(const SpectralField& f) const {
  GridField out(dim_, g_);
  synthesize(f, out);
  return out;
}

SpectralField SineTransform::analyze(const GridField& grid, int n_out) const {
  SpectralField full(dim_, n_);
  analyze(grid, full);
  return n_out == n_ ? full : project(full, n_out);
}

std::shared_ptr<const SineTransform> transform_plan(int dim, int n, int g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const SineTransform>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& plan = cache[{dim, n, g}];
  if (!plan) plan = std::make_shared<SineTransform>(dim, n, g);
  return plan;
}

GridField synthesize(const SpectralField& f, int g) {
  return transform_plan(f.dim(), f.n(), g)->synthesize(f);
}

SpectralField analyze(const GridField& grid, int n) {
  if (grid.g < n + 1)
    throw std::invalid_argument("grid too coarse for requested truncation");
  SpectralField out(grid.dim, n);
  transform_plan(grid.dim, n, grid.g)->analyze(grid, out);
  return out;
}

}  // namespace swe
