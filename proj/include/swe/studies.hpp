#pragma once

#include <string>
#include <vector>

#include "swe/config.hpp"
#include "swe/observables.hpp"
#include "swe/slope.hpp"

namespace swe {

inline constexpr const char* kVersion = "0.1.0";

struct GuardSummary {
  bool it1_exceeded = false;
  bool it2_exceeded = false;
  bool taming_fired = false;
  int max_iterations = 0;
};

struct SimulateResult {
  std::vector<double> times;
  // trajectory-major energy records at the sampled times
  std::vector<std::vector<EnergyRecord>> energies;
  GuardSummary guards;
  std::string csv_path, manifest_path;
};

struct EnergyStudyResult {
  std::vector<double> times, mean, std_error, theory;
  double trace = 0.0;
  double theory_intercept = 0.0, theory_slope = 0.0;
  FitResult fit;  // linear fit of mean vs t
  GuardSummary guards;
  std::string csv_path, manifest_path;
};

struct ConvergenceResult {
  std::vector<double> params;  // truncations or step sizes, ascending
  std::vector<double> errors, std_errors;
  FitResult fit;       // log error vs log param
  double order = 0.0;  // decay order: -slope for truncations, +slope for steps
  bool strictly_decreasing = false;
  GuardSummary guards;
  std::string csv_path, manifest_path;
};

struct ExpMomentResult {
  std::vector<double> c_values;
  std::vector<ExpMomentEstimate> at_horizon;        // per c
  std::vector<double> checkpoint_times;
  std::vector<std::vector<ExpMomentEstimate>> at_checkpoints;  // [c][time]
  GuardSummary guards;
  std::string csv_path, manifest_path;
};

// Each study resolves its defaults from cfg, runs trajectories on a bounded
// worker pool (results combined in trajectory order, so output bytes do not
// depend on the worker count), and writes one CSV plus manifest.json into
// cfg.output.dir. An empty dir skips the file output.
SimulateResult run_simulate(const ExperimentConfig& cfg);
EnergyStudyResult run_energy_study(const ExperimentConfig& cfg);
ConvergenceResult run_spatial_convergence(const ExperimentConfig& cfg);
ConvergenceResult run_temporal_convergence(const ExperimentConfig& cfg);
ExpMomentResult run_exp_moment_study(const ExperimentConfig& cfg);

}  // namespace swe
