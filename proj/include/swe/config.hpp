#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swe/field.hpp"
#include "swe/integrator.hpp"
#include "swe/noise.hpp"
#include "swe/polynomial.hpp"

namespace swe {

struct InitialData {
  enum class Kind { zero, constant, mode } kind = Kind::zero;
  double value = 0.0;  // constant value or mode amplitude
  int k = 1, l = 1;

  SpectralField build(int dim, int n) const;
  std::string describe() const;
  static InitialData parse(const std::string& text);
};

struct ModelConfig {
  int dim = 2;
  double c3 = 1.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;
  InitialData u0;
  InitialData v0 = {InitialData::Kind::constant, 1.0, 1, 1};
  double T = 1.0;

  CubicPolynomial polynomial() const { return {c3, c2, c1, c0}; }
};

struct NoiseConfig {
  enum class Family { power1d, power2d, file, zero } family = Family::power2d;
  double p = 3.0;
  std::string file;
  int level = -1;  // finest dyadic level; -1 resolves to the working step size
  std::optional<double> beta;
  std::uint64_t max_path_bytes = 1ull << 28;

  NoiseSpectrum build(int dim, int n_max) const;
};

struct SchemeSection {
  double h = 1.0 / 64;
  int n = 16;
  Solver solver = Solver::iteration1;
  double tol = 1e-12;
  int max_iter = 100;
  double epsilon = 0.0;
  std::vector<double> h_list;  // temporal study
  double h_ref = 0.0;
  std::vector<int> n_list;     // spatial study
  int n_ref = 0;

  SchemeConfig scheme(double T) const;
  SchemeConfig scheme(double T, double h_override, int n_override) const;
};

struct McConfig {
  int trajectories = 500;
  std::uint64_t seed = 42;
  int workers = 0;       // 0: hardware concurrency
  int error_moment = 1;  // 1: RMS of the error norm, 2: fourth-moment root
  std::vector<double> exp_c = {1.0};
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<double> sample_times;  // empty: per-study default
};

struct ExperimentConfig {
  ModelConfig model;
  NoiseConfig noise;
  SchemeSection scheme;
  McConfig mc;
  OutputConfig output;

  void validate() const;

  static ExperimentConfig defaults();
  // TOML config or a manifest.json written by a previous run.
  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_toml_text(const std::string& text);

  std::string to_json() const;  // resolved config, embedded in manifests
  static ExperimentConfig from_json_text(const std::string& text);
};

// T/h as an exact integer power of two exponent; throws otherwise.
int dyadic_level(double T, double h);

}  // namespace swe
