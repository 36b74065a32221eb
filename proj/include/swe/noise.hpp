#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swe/field.hpp"

namespace swe {

// Per-mode variances of a covariance operator diagonal in the sine basis.
// Values are materialized up to a fixed truncation; the built-in families are
// nonincreasing along each index direction.
class NoiseSpectrum {
 public:
  NoiseSpectrum() = default;
  NoiseSpectrum(int dim, int n_max, std::vector<double> eta,
                std::optional<double> beta = std::nullopt);

  // eta_k = k^-p
  static NoiseSpectrum power1d(double p, int n_max);
  // eta_{k,l} = 1/(k^p + l^p)
  static NoiseSpectrum power2d(double p, int n_max);
  // Plain text, one line per mode: "k eta" (1D) or "k l eta" (2D).
  static NoiseSpectrum from_file(const std::string& path, int dim, int n_max);

  int dim() const { return dim_; }
  int n_max() const { return n_max_; }
  std::optional<double> beta() const { return beta_; }

  double eta(int k) const { return eta_[static_cast<std::size_t>(k - 1)]; }
  double eta(int k, int l) const {
    return eta_[static_cast<std::size_t>(k - 1) * n_max_ + (l - 1)];
  }
  const std::vector<double>& values() const { return eta_; }

 private:
  int dim_ = 2;
  int n_max_ = 0;
  std::vector<double> eta_;
  std::optional<double> beta_;
};

// Tr((P_N Q^(1/2))(P_N Q^(1/2))^*) = sum of eta over retained modes; this is
// the drift rate of the mean energy (up to the factor 1/2).
double trace_truncated(const NoiseSpectrum& q, int n);

// Seedable Wiener-increment source on a dyadic grid of 2^level steps over
// [0, T]. Every leaf draw is keyed by (seed, trajectory, fine step, mode), and
// coarse increments are pairwise dyadic sums of their children, so increments
// at any two levels are bit-consistent and independent of evaluation order.
class PathGenerator {
 public:
  PathGenerator(std::uint64_t seed, std::uint32_t trajectory,
                std::shared_ptr<const NoiseSpectrum> spectrum, int level,
                double T);

  int level() const { return level_; }
  double horizon() const { return T_; }
  double finest_h() const { return T_ / static_cast<double>(steps_); }
  const NoiseSpectrum& spectrum() const { return *spectrum_; }

  // Increment over [m h, (m+1) h] truncated to n modes per dimension.
  // h must be a 2^j multiple of the finest resolution.
  SpectralField increment(std::int64_t m, double h, int n) const;

  // Full increment stream at the given coarser level.
  std::vector<SpectralField> aggregate(int level, int n) const;

  // One leaf draw, N(0, eta * finest_h).
  double leaf(std::int64_t fine_step, int k, int l) const;

  // Materialized finest-level stream (fine step major, mode minor), reused by
  // refinement studies; respects max_bytes.
  struct Materialized {
    std::int64_t steps = 0;
    int n = 0;
    int dim = 1;
    std::vector<double> w;  // steps x modes
    const double* step_data(std::int64_t s) const {
      return w.data() + static_cast<std::size_t>(s) *
                            static_cast<std::size_t>(SpectralField::size_for(dim, n));
    }
  };
  Materialized materialize(int n, std::size_t max_bytes) const;

  // Level-l increment m assembled from a materialized stream by the same
  // pairwise tree as increment(); bitwise identical to it.
  static SpectralField increment_from(const Materialized& mat, int level_from,
                                      int level_to, std::int64_t m);

 private:
  double tree_sum(std::int64_t begin, std::int64_t len, int k, int l) const;

  std::uint64_t seed_;
  std::uint32_t traj_;
  std::shared_ptr<const NoiseSpectrum> spectrum_;
  int level_;
  std::int64_t steps_;
  double T_;
};

}  // namespace swe
