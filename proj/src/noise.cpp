#include "swe/noise.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "swe/philox.hpp"

namespace swe {

NoiseSpectrum::NoiseSpectrum(int dim, int n_max, std::vector<double> eta,
                             std::optional<double> beta)
    : dim_(dim), n_max_(n_max), eta_(std::move(eta)), beta_(beta) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (eta_.size() != static_cast<std::size_t>(SpectralField::size_for(dim, n_max)))
    throw std::invalid_argument("spectrum size does not match truncation");
  for (double e : eta_)
    if (!(e >= 0.0)) throw std::invalid_argument("mode variances must be >= 0");
}

NoiseSpectrum NoiseSpectrum::power1d(double p, int n_max) {
  std::vector<double> eta(n_max);
  for (int k = 1; k <= n_max; ++k) eta[k - 1] = std::pow(k, -p);
  return NoiseSpectrum(1, n_max, std::move(eta));
}

NoiseSpectrum NoiseSpectrum::power2d(double p, int n_max) {
  std::vector<double> eta(static_cast<std::size_t>(n_max) * n_max);
  for (int k = 1; k <= n_max; ++k)
    for (int l = 1; l <= n_max; ++l)
      eta[static_cast<std::size_t>(k - 1) * n_max + (l - 1)] =
          1.0 / (std::pow(k, p) + std::pow(l, p));
  return NoiseSpectrum(2, n_max, std::move(eta));
}

NoiseSpectrum NoiseSpectrum::from_file(const std::string& path, int dim,
                                       int n_max) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spectrum file: " + path);
  std::vector<double> eta(
      static_cast<std::size_t>(SpectralField::size_for(dim, n_max)), 0.0);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    if (line.empty() || line[0] == '#') continue;
    int k = 0, l = 1;
    double e = -1.0;
    if (dim == 1)
      ss >> k >> e;
    else
      ss >> k >> l >> e;
    if (!ss || k < 1 || l < 1)
      throw std::runtime_error("bad spectrum line " + std::to_string(lineno));
    if (!(e >= 0.0))
      throw std::runtime_error("negative variance at line " +
                               std::to_string(lineno));
    if (k > n_max || l > n_max) continue;  // beyond retained truncation
    eta[dim == 1 ? static_cast<std::size_t>(k - 1)
                 : static_cast<std::size_t>(k - 1) * n_max + (l - 1)] = e;
  }
  return NoiseSpectrum(dim, n_max, std::move(eta));
}

double trace_truncated(const NoiseSpectrum& q, int n) {
  if (n < 1) throw std::invalid_argument("truncation must be >= 1");
  if (n > q.n_max())
    throw std::invalid_argument("truncation exceeds materialized spectrum");
  double s = 0.0;
  if (q.dim() == 1) {
    for (int k = 1; k <= n; ++k) s += q.eta(k);
  } else {
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) s += q.eta(k, l);
  }
  return s;
}

PathGenerator::PathGenerator(std::uint64_t seed, std::uint32_t trajectory,
                             std::shared_ptr<const NoiseSpectrum> spectrum,
                             int level, double T)
    : seed_(seed),
      traj_(trajectory),
      spectrum_(std::move(spectrum)),
      level_(level),
      steps_(std::int64_t(1) << level),
      T_(T) {
  if (level < 0 || level > 30) throw std::invalid_argument("level out of range");
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!spectrum_) throw std::invalid_argument("spectrum required");
}

double PathGenerator::leaf(std::int64_t fine_step, int k, int l) const {
  const double eta =
      spectrum_->dim() == 1 ? spectrum_->eta(k) : spectrum_->eta(k, l);
  if (eta == 0.0) return 0.0;
  const double z = philox_normal(seed_, static_cast<std::uint32_t>(fine_step),
                                 traj_, static_cast<std::uint32_t>(k),
                                 static_cast<std::uint32_t>(l));
  return std::sqrt(eta * finest_h()) * z;
}

double PathGenerator::tree_sum(std::int64_t begin, std::int64_t len, int k,
                               int l) const {
  if (len == 1) return leaf(begin, k, l);
  const std::int64_t half = len / 2;
  return tree_sum(begin, half, k, l) + tree_sum(begin + half, half, k, l);
}

SpectralField PathGenerator::increment(std::int64_t m, double h, int n) const {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  const double ratio_f = h / finest_h();
  const auto ratio = static_cast<std::int64_t>(std::llround(ratio_f));
  if (ratio < 1 || std::abs(ratio_f - static_cast<double>(ratio)) > 1e-9 ||
      (ratio & (ratio - 1)) != 0)
    throw std::invalid_argument(
        "step size is not a dyadic multiple of the finest resolution");
  const std::int64_t begin = m * ratio;
  if (m < 0 || begin + ratio > steps_)
    throw std::out_of_range("step index outside the path horizon");
  if (n > spectrum_->n_max())
    throw std::invalid_argument("truncation exceeds materialized spectrum");
  SpectralField out(spectrum_->dim(), n);
  if (spectrum_->dim() == 1) {
    for (int k = 1; k <= n; ++k) out.at(k) = tree_sum(begin, ratio, k, 0);
  } else {
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) out.at(k, l) = tree_sum(begin, ratio, k, l);
  }
  return out;
}

std::vector<SpectralField> PathGenerator::aggregate(int level, int n) const {
  if (level < 0 || level > level_)
    throw std::invalid_argument("aggregation level out of range");
  const std::int64_t m_steps = std::int64_t(1) << level;
  const double h = T_ / static_cast<double>(m_steps);
  std::vector<SpectralField> out;
  out.reserve(static_cast<std::size_t>(m_steps));
  for (std::int64_t m = 0; m < m_steps; ++m) out.push_back(increment(m, h, n));
  return out;
}

PathGenerator::Materialized PathGenerator::materialize(
    int n, std::size_t max_bytes) const {
  const std::size_t modes =
      static_cast<std::size_t>(SpectralField::size_for(spectrum_->dim(), n));
  const std::size_t bytes = modes * static_cast<std::size_t>(steps_) * 8;
  if (bytes > max_bytes)
    throw std::runtime_error("materialized path would need " +
                             std::to_string(bytes) +
                             " bytes, above the configured cap");
  Materialized mat;
  mat.steps = steps_;
  mat.n = n;
  mat.dim = spectrum_->dim();
  mat.w.resize(modes * static_cast<std::size_t>(steps_));
  for (std::int64_t s = 0; s < steps_; ++s) {
    double* row = mat.w.data() + static_cast<std::size_t>(s) * modes;
    if (mat.dim == 1) {
      for (int k = 1; k <= n; ++k) row[k - 1] = leaf(s, k, 0);
    } else {
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          row[static_cast<std::size_t>(k - 1) * n + (l - 1)] = leaf(s, k, l);
    }
  }
  return mat;
}

namespace {
double tree_sum_mat(const PathGenerator::Materialized& mat, std::int64_t begin,
                    std::int64_t len, std::size_t mode) {
  if (len == 1) return mat.step_data(begin)[mode];
  const std::int64_t half = len / 2;
  return tree_sum_mat(mat, begin, half, mode) +
         tree_sum_mat(mat, begin + half, half, mode);
}
}  // namespace

SpectralField PathGenerator::increment_from(const Materialized& mat,
                                            int level_from, int level_to,
                                            std::int64_t m) {
  if (level_to > level_from) throw std::invalid_argument("level out of range");
  const std::int64_t ratio = std::int64_t(1) << (level_from - level_to);
  const std::int64_t begin = m * ratio;
  if (m < 0 || begin + ratio > mat.steps)
    throw std::out_of_range("step index outside the path horizon");
  SpectralField out(mat.dim, mat.n);
  const std::size_t modes = out.size();
  for (std::size_t mode = 0; mode < modes; ++mode)
    out.data()[mode] = tree_sum_mat(mat, begin, ratio, mode);
  return out;
}

}  // namespace swe
