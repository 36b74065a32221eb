#include "swe/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "swe/integrator.hpp"
#include "swe/kernels.hpp"
#include "swe/nonlinearity.hpp"
#include "swe/spectral.hpp"

namespace swe {
namespace {

using nlohmann::ordered_json;

int resolve_workers(const McConfig& mc) {
  if (mc.workers > 0) return mc.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first failure
// wins; remaining items are skipped.
template <class Fn>
void parallel_for(int n, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::int64_t> steps_from_times(const std::vector<double>& times,
                                           double h, double T) {
  std::vector<std::int64_t> steps;
  const auto m_total = static_cast<std::int64_t>(std::llround(T / h));
  for (double t : times) {
    const auto m = static_cast<std::int64_t>(std::llround(t / h));
    if (std::abs(static_cast<double>(m) * h - t) > 1e-9 * std::max(1.0, t))
      throw std::invalid_argument("sample time is not a multiple of the step size");
    if (m < 0 || m > m_total)
      throw std::invalid_argument("sample time outside the horizon");
    steps.push_back(m);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

std::vector<std::int64_t> all_steps(double T, double h) {
  const auto m_total = static_cast<std::int64_t>(std::llround(T / h));
  std::vector<std::int64_t> steps(static_cast<std::size_t>(m_total) + 1);
  for (std::int64_t m = 0; m <= m_total; ++m) steps[static_cast<std::size_t>(m)] = m;
  return steps;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << fmt17(row[i]);
    }
    out << "\n";
  }
}

ordered_json guards_json(const GuardSummary& g) {
  return {{"it1_exceeded", g.it1_exceeded},
          {"it2_exceeded", g.it2_exceeded},
          {"taming_fired", g.taming_fired},
          {"max_iterations", g.max_iterations}};
}

void write_manifest(const std::string& path, const std::string& study,
                    const ExperimentConfig& cfg, const ordered_json& derived,
                    const GuardSummary& guards,
                    const std::vector<std::string>& outputs) {
  ordered_json j;
  j["study"] = study;
  j["version"] = kVersion;
  j["kernels"] = kern::active_name();
  j["config"] = ordered_json::parse(cfg.to_json());
  j["derived"] = derived;
  j["guards"] = guards_json(guards);
  j["outputs"] = outputs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

struct StudySetup {
  CubicPolynomial poly;
  Potential potential;
  std::shared_ptr<const NoiseSpectrum> spectrum;
  int level = 0;
  bool zero_noise = false;

  StudySetup(const ExperimentConfig& cfg, int n_max, int working_level)
      : poly(cfg.model.polynomial()), potential(poly) {
    zero_noise = cfg.noise.family == NoiseConfig::Family::zero;
    spectrum = std::make_shared<NoiseSpectrum>(cfg.noise.build(cfg.model.dim, n_max));
    level = cfg.noise.level < 0 ? working_level : cfg.noise.level;
    if (level < working_level)
      throw std::invalid_argument(
          "noise level is coarser than the working step size");
  }
};

PhaseState initial_state(const ExperimentConfig& cfg, int n) {
  return PhaseState(cfg.model.u0.build(cfg.model.dim, n),
                    cfg.model.v0.build(cfg.model.dim, n));
}

void merge_guards(GuardSummary& g, const TrajectoryRecord& rec) {
  g.it1_exceeded = g.it1_exceeded || rec.guard_it1_exceeded;
  g.it2_exceeded = g.it2_exceeded || rec.guard_it2_exceeded;
  g.taming_fired = g.taming_fired || rec.taming_fired;
  g.max_iterations = std::max(g.max_iterations, rec.max_iterations);
}

std::string wrap_traj(int t, const std::exception& e) {
  return "trajectory " + std::to_string(t) + ": " + e.what();
}

}  // namespace

SimulateResult run_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const double T = cfg.model.T;
  const SchemeConfig sc = cfg.scheme.scheme(T);
  const StudySetup setup(cfg, sc.n, dyadic_level(T, sc.h));
  const std::vector<std::int64_t> samples =
      cfg.output.sample_times.empty()
          ? all_steps(T, sc.h)
          : steps_from_times(cfg.output.sample_times, sc.h, T);
  const PhaseState x0 = initial_state(cfg, sc.n);

  SimulateResult res;
  res.energies.resize(static_cast<std::size_t>(cfg.mc.trajectories));
  std::vector<TrajectoryRecord> recs(res.energies.size());
  parallel_for(cfg.mc.trajectories, resolve_workers(cfg.mc), [&](int t) {
    NoiseFn noise;
    if (!setup.zero_noise) {
      PathGenerator gen(cfg.mc.seed, static_cast<std::uint32_t>(t),
                        setup.spectrum, setup.level, T);
      noise = [gen = std::move(gen), &sc](std::int64_t m) {
        return gen.increment(m, sc.h, sc.n);
      };
    }
    try {
      recs[static_cast<std::size_t>(t)] = integrate(x0, sc, setup.poly, noise, samples);
    } catch (const SolverError& e) {
      throw std::runtime_error(wrap_traj(t, e));
    }
    auto& rec = recs[static_cast<std::size_t>(t)];
    auto& out = res.energies[static_cast<std::size_t>(t)];
    out.reserve(rec.states.size());
    for (std::size_t i = 0; i < rec.states.size(); ++i) {
      EnergyRecord er = energy_V1(rec.states[i], setup.potential);
      er.t = rec.times[i];
      out.push_back(er);
    }
    rec.states.clear();
  });
  for (const auto& r : recs) merge_guards(res.guards, r);
  res.times = recs.empty() ? std::vector<double>{} : recs.front().times;

  if (!cfg.output.dir.empty()) {
    std::filesystem::create_directories(cfg.output.dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < res.energies.size(); ++t)
      for (const auto& er : res.energies[t])
        rows.push_back({static_cast<double>(t), er.t, er.V1, er.kinetic,
                        er.elastic, er.potential});
    res.csv_path = cfg.output.dir + "/trajectory.csv";
    write_csv(res.csv_path, "traj,t,V1,kinetic,elastic,potential", rows);
    ordered_json derived = {
        {"trace", setup.zero_noise ? 0.0 : trace_truncated(*setup.spectrum, sc.n)}};
    res.manifest_path = cfg.output.dir + "/manifest.json";
    write_manifest(res.manifest_path, "simulate", cfg, derived, res.guards,
                   {"trajectory.csv"});
  }
  return res;
}

EnergyStudyResult run_energy_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const double T = cfg.model.T;
  const SchemeConfig sc = cfg.scheme.scheme(T);
  const StudySetup setup(cfg, sc.n, dyadic_level(T, sc.h));
  const std::vector<std::int64_t> samples =
      cfg.output.sample_times.empty()
          ? all_steps(T, sc.h)
          : steps_from_times(cfg.output.sample_times, sc.h, T);
  const PhaseState x0 = initial_state(cfg, sc.n);

  const auto n_traj = static_cast<std::size_t>(cfg.mc.trajectories);
  std::vector<std::vector<double>> v1(n_traj);
  std::vector<TrajectoryRecord> recs(n_traj);
  parallel_for(cfg.mc.trajectories, resolve_workers(cfg.mc), [&](int t) {
    NoiseFn noise;
    if (!setup.zero_noise) {
      PathGenerator gen(cfg.mc.seed, static_cast<std::uint32_t>(t),
                        setup.spectrum, setup.level, T);
      noise = [gen = std::move(gen), &sc](std::int64_t m) {
        return gen.increment(m, sc.h, sc.n);
      };
    }
    TrajectoryRecord rec;
    try {
      rec = integrate(x0, sc, setup.poly, noise, samples);
    } catch (const SolverError& e) {
      throw std::runtime_error(wrap_traj(t, e));
    }
    auto& out = v1[static_cast<std::size_t>(t)];
    out.reserve(rec.states.size());
    for (const auto& s : rec.states)
      out.push_back(energy_V1(s, setup.potential).V1);
    rec.states.clear();
    recs[static_cast<std::size_t>(t)] = std::move(rec);
  });

  EnergyStudyResult res;
  for (const auto& r : recs) merge_guards(res.guards, r);
  res.times.reserve(samples.size());
  for (auto m : samples) res.times.push_back(static_cast<double>(m) * sc.h);

  const std::size_t n_times = res.times.size();
  res.mean.assign(n_times, 0.0);
  res.std_error.assign(n_times, 0.0);
  for (std::size_t i = 0; i < n_times; ++i) {
    double s = 0.0;
    for (std::size_t t = 0; t < n_traj; ++t) s += v1[t][i];
    const double mean = s / static_cast<double>(n_traj);
    double ss = 0.0;
    for (std::size_t t = 0; t < n_traj; ++t) {
      const double d = v1[t][i] - mean;
      ss += d * d;
    }
    res.mean[i] = mean;
    res.std_error[i] =
        n_traj > 1 ? std::sqrt(ss / (static_cast<double>(n_traj) - 1.0) /
                               static_cast<double>(n_traj))
                   : 0.0;
  }

  res.trace = setup.zero_noise ? 0.0 : trace_truncated(*setup.spectrum, sc.n);
  res.theory_intercept = energy_V1(x0, setup.potential).V1;
  res.theory_slope = 0.5 * res.trace;
  res.theory.reserve(n_times);
  for (double t : res.times)
    res.theory.push_back(res.theory_intercept + res.theory_slope * t);

  std::vector<std::pair<double, double>> pts;
  pts.reserve(n_times);
  for (std::size_t i = 0; i < n_times; ++i) pts.emplace_back(res.times[i], res.mean[i]);
  res.fit = fit_linear(pts);

  if (!cfg.output.dir.empty()) {
    std::filesystem::create_directories(cfg.output.dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n_times; ++i)
      rows.push_back({res.times[i], res.mean[i], res.std_error[i], res.theory[i]});
    res.csv_path = cfg.output.dir + "/energy.csv";
    write_csv(res.csv_path, "t,mean_V1,stderr,theory", rows);
    ordered_json derived = {
        {"trace", res.trace},
        {"theory_intercept", res.theory_intercept},
        {"theory_slope", res.theory_slope},
        {"fitted_slope", res.fit.slope},
        {"fitted_intercept", res.fit.intercept},
        {"fitted_slope_stderr", res.fit.std_error},
        {"fitted_slope_ci95",
         {res.fit.slope - 1.96 * res.fit.std_error,
          res.fit.slope + 1.96 * res.fit.std_error}}};
    res.manifest_path = cfg.output.dir + "/manifest.json";
    write_manifest(res.manifest_path, "energy", cfg, derived, res.guards,
                   {"energy.csv"});
  }
  return res;
}

namespace {

// Shared error-reduction for the two convergence studies: per parameter,
// mean of err^(2p) over trajectories -> error = mean^(1/(2p)) with the
// delta-method standard error.
struct ErrorReduce {
  double error = 0.0, std_error = 0.0;
};

ErrorReduce reduce_errors(const std::vector<double>& pow_errors, int p) {
  const auto n = static_cast<double>(pow_errors.size());
  double s = 0.0;
  for (double e : pow_errors) s += e;
  const double mean = s / n;
  double ss = 0.0;
  for (double e : pow_errors) ss += (e - mean) * (e - mean);
  const double se_mean = pow_errors.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  ErrorReduce r;
  const double expo = 1.0 / (2.0 * p);
  r.error = std::pow(mean, expo);
  r.std_error = mean > 0.0 ? se_mean * expo * r.error / mean : 0.0;
  return r;
}

}  // namespace

ConvergenceResult run_spatial_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.scheme.n_list.empty() || cfg.scheme.n_ref <= 0)
    throw std::invalid_argument("spatial study needs n_list and n_ref");
  const double T = cfg.model.T;
  const int n_ref = cfg.scheme.n_ref;
  std::vector<int> n_list = cfg.scheme.n_list;
  std::sort(n_list.begin(), n_list.end());

  const StudySetup setup(cfg, n_ref, dyadic_level(T, cfg.scheme.h));
  std::vector<double> times = cfg.output.sample_times;
  if (times.empty())
    for (int i = 1; i <= 8; ++i) times.push_back(T * i / 8.0);
  const std::vector<std::int64_t> samples = steps_from_times(times, cfg.scheme.h, T);

  const auto n_traj = static_cast<std::size_t>(cfg.mc.trajectories);
  const int p = cfg.mc.error_moment;
  // per trajectory: [n_idx][time_idx] -> err^(2p)
  std::vector<std::vector<std::vector<double>>> errs(n_traj);
  std::vector<GuardSummary> guards(n_traj);

  parallel_for(cfg.mc.trajectories, resolve_workers(cfg.mc), [&](int t) {
    PathGenerator gen(cfg.mc.seed, static_cast<std::uint32_t>(t), setup.spectrum,
                      setup.level, T);
    auto run_at = [&](int n) {
      const SchemeConfig sc = cfg.scheme.scheme(T, cfg.scheme.h, n);
      NoiseFn noise;
      if (!setup.zero_noise)
        noise = [&gen, &sc](std::int64_t m) { return gen.increment(m, sc.h, sc.n); };
      return integrate(initial_state(cfg, n), sc, setup.poly, noise, samples);
    };
    try {
      const TrajectoryRecord ref = run_at(n_ref);
      merge_guards(guards[static_cast<std::size_t>(t)], ref);
      auto& per_n = errs[static_cast<std::size_t>(t)];
      per_n.resize(n_list.size());
      for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const TrajectoryRecord coarse = run_at(n_list[ni]);
        merge_guards(guards[static_cast<std::size_t>(t)], coarse);
        per_n[ni].resize(samples.size());
        for (std::size_t si = 0; si < samples.size(); ++si) {
          const double e = theorem_error(coarse.states[si], ref.states[si]);
          per_n[ni][si] = p == 1 ? e * e : e * e * e * e;
        }
      }
    } catch (const SolverError& e) {
      throw std::runtime_error(wrap_traj(t, e));
    }
  });

  ConvergenceResult res;
  for (const auto& g : guards) {
    res.guards.it1_exceeded |= g.it1_exceeded;
    res.guards.it2_exceeded |= g.it2_exceeded;
    res.guards.taming_fired |= g.taming_fired;
    res.guards.max_iterations = std::max(res.guards.max_iterations, g.max_iterations);
  }
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    ErrorReduce best{};
    std::vector<double> pow_errors(n_traj);
    for (std::size_t si = 0; si < samples.size(); ++si) {
      for (std::size_t t = 0; t < n_traj; ++t) pow_errors[t] = errs[t][ni][si];
      const ErrorReduce r = reduce_errors(pow_errors, p);
      if (r.error > best.error) best = r;
    }
    res.params.push_back(static_cast<double>(n_list[ni]));
    res.errors.push_back(best.error);
    res.std_errors.push_back(best.std_error);
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < res.params.size(); ++i)
    pts.emplace_back(res.params[i], res.errors[i]);
  res.fit = fit_slope(pts);
  res.order = -res.fit.slope;
  res.strictly_decreasing = true;
  for (std::size_t i = 1; i < res.errors.size(); ++i)
    res.strictly_decreasing &= res.errors[i] < res.errors[i - 1];

  if (!cfg.output.dir.empty()) {
    std::filesystem::create_directories(cfg.output.dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.params.size(); ++i)
      rows.push_back({res.params[i], res.errors[i], res.std_errors[i]});
    res.csv_path = cfg.output.dir + "/converge_space.csv";
    write_csv(res.csv_path, "param,error,stderr", rows);
    ordered_json derived = {{"n_ref", n_ref},
                            {"fitted_slope", res.fit.slope},
                            {"order", res.order},
                            {"fitted_slope_stderr", res.fit.std_error},
                            {"strictly_decreasing", res.strictly_decreasing},
                            {"error_moment", p}};
    res.manifest_path = cfg.output.dir + "/manifest.json";
    write_manifest(res.manifest_path, "converge-space", cfg, derived, res.guards,
                   {"converge_space.csv"});
  }
  return res;
}

ConvergenceResult run_temporal_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.scheme.h_list.empty() || !(cfg.scheme.h_ref > 0.0))
    throw std::invalid_argument("temporal study needs h_list and h_ref");
  const double T = cfg.model.T;
  const int n = cfg.scheme.n;
  const int level_ref = dyadic_level(T, cfg.scheme.h_ref);
  std::vector<double> h_list = cfg.scheme.h_list;
  std::sort(h_list.begin(), h_list.end());

  // one finest-level path per trajectory, refined down to each coarse run
  const StudySetup setup(cfg, n, level_ref);
  if (setup.level != level_ref)
    throw std::invalid_argument(
        "temporal study requires the noise level to match the reference step");
  const auto m_end_ref = static_cast<std::int64_t>(std::llround(T / cfg.scheme.h_ref));
  const std::vector<std::int64_t> ref_sample = {m_end_ref};

  const auto n_traj = static_cast<std::size_t>(cfg.mc.trajectories);
  const int p = cfg.mc.error_moment;
  std::vector<std::vector<double>> errs(n_traj);  // [h_idx] -> err^(2p) at T
  std::vector<GuardSummary> guards(n_traj);

  parallel_for(cfg.mc.trajectories, resolve_workers(cfg.mc), [&](int t) {
    PathGenerator gen(cfg.mc.seed, static_cast<std::uint32_t>(t), setup.spectrum,
                      level_ref, T);
    try {
      const PathGenerator::Materialized mat =
          gen.materialize(n, cfg.noise.max_path_bytes);
      auto run_at = [&](double h, int level) {
        const SchemeConfig sc = cfg.scheme.scheme(T, h, n);
        NoiseFn noise = [&mat, level_ref, level](std::int64_t m) {
          return PathGenerator::increment_from(mat, level_ref, level, m);
        };
        const auto m_end = static_cast<std::int64_t>(std::llround(T / h));
        return integrate(initial_state(cfg, n), sc, setup.poly, noise, {m_end});
      };
      const TrajectoryRecord ref = run_at(cfg.scheme.h_ref, level_ref);
      merge_guards(guards[static_cast<std::size_t>(t)], ref);
      auto& per_h = errs[static_cast<std::size_t>(t)];
      per_h.resize(h_list.size());
      for (std::size_t hi = 0; hi < h_list.size(); ++hi) {
        const int level = dyadic_level(T, h_list[hi]);
        const TrajectoryRecord run = run_at(h_list[hi], level);
        merge_guards(guards[static_cast<std::size_t>(t)], run);
        const double e = theorem_error(run.states.back(), ref.states.back());
        per_h[hi] = p == 1 ? e * e : e * e * e * e;
      }
    } catch (const SolverError& e) {
      throw std::runtime_error(wrap_traj(t, e));
    }
  });

  ConvergenceResult res;
  for (const auto& g : guards) {
    res.guards.it1_exceeded |= g.it1_exceeded;
    res.guards.it2_exceeded |= g.it2_exceeded;
    res.guards.taming_fired |= g.taming_fired;
    res.guards.max_iterations = std::max(res.guards.max_iterations, g.max_iterations);
  }
  std::vector<double> pow_errors(n_traj);
  for (std::size_t hi = 0; hi < h_list.size(); ++hi) {
    for (std::size_t t = 0; t < n_traj; ++t) pow_errors[t] = errs[t][hi];
    const ErrorReduce r = reduce_errors(pow_errors, p);
    res.params.push_back(h_list[hi]);
    res.errors.push_back(r.error);
    res.std_errors.push_back(r.std_error);
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < res.params.size(); ++i)
    pts.emplace_back(res.params[i], res.errors[i]);
  res.fit = fit_slope(pts);
  res.order = res.fit.slope;
  res.strictly_decreasing = true;
  for (std::size_t i = 1; i < res.errors.size(); ++i)
    res.strictly_decreasing &= res.errors[i] > res.errors[i - 1];  // vs h ascending

  if (!cfg.output.dir.empty()) {
    std::filesystem::create_directories(cfg.output.dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.params.size(); ++i)
      rows.push_back({res.params[i], res.errors[i], res.std_errors[i]});
    res.csv_path = cfg.output.dir + "/converge_time.csv";
    write_csv(res.csv_path, "param,error,stderr", rows);
    ordered_json derived = {{"h_ref", cfg.scheme.h_ref},
                            {"fitted_slope", res.fit.slope},
                            {"order", res.order},
                            {"fitted_slope_stderr", res.fit.std_error},
                            {"strictly_decreasing", res.strictly_decreasing},
                            {"error_moment", p}};
    res.manifest_path = cfg.output.dir + "/manifest.json";
    write_manifest(res.manifest_path, "converge-time", cfg, derived, res.guards,
                   {"converge_time.csv"});
  }
  return res;
}

ExpMomentResult run_exp_moment_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const double T = cfg.model.T;
  const SchemeConfig sc = cfg.scheme.scheme(T);
  const StudySetup setup(cfg, sc.n, dyadic_level(T, sc.h));
  std::vector<double> checkpoints = cfg.output.sample_times;
  if (checkpoints.empty()) checkpoints = {T / 4.0, T / 2.0, T};
  const std::vector<std::int64_t> chk_steps = steps_from_times(checkpoints, sc.h, T);
  const std::vector<std::int64_t> samples = all_steps(T, sc.h);
  const PhaseState x0 = initial_state(cfg, sc.n);

  const auto n_traj = static_cast<std::size_t>(cfg.mc.trajectories);
  // per trajectory, running sum of ||u_i||_{L6}^2 at each checkpoint
  std::vector<std::vector<double>> sums(n_traj);
  std::vector<GuardSummary> guards(n_traj);

  parallel_for(cfg.mc.trajectories, resolve_workers(cfg.mc), [&](int t) {
    NoiseFn noise;
    if (!setup.zero_noise) {
      PathGenerator gen(cfg.mc.seed, static_cast<std::uint32_t>(t),
                        setup.spectrum, setup.level, T);
      noise = [gen = std::move(gen), &sc](std::int64_t m) {
        return gen.increment(m, sc.h, sc.n);
      };
    }
    TrajectoryRecord rec;
    try {
      rec = integrate(x0, sc, setup.poly, noise, samples);
    } catch (const SolverError& e) {
      throw std::runtime_error(wrap_traj(t, e));
    }
    merge_guards(guards[static_cast<std::size_t>(t)], rec);
    auto& out = sums[static_cast<std::size_t>(t)];
    out.assign(chk_steps.size(), 0.0);
    double running = 0.0;
    std::size_t ci = 0;
    for (std::size_t i = 0; i < rec.states.size() && ci < chk_steps.size(); ++i) {
      const double l6 = lp_norm(rec.states[i].u, 6);
      running += l6 * l6;
      while (ci < chk_steps.size() &&
             samples[i] == chk_steps[ci]) {
        out[ci] = running;
        ++ci;
      }
    }
  });

  ExpMomentResult res;
  for (const auto& g : guards) {
    res.guards.it1_exceeded |= g.it1_exceeded;
    res.guards.it2_exceeded |= g.it2_exceeded;
    res.guards.taming_fired |= g.taming_fired;
    res.guards.max_iterations = std::max(res.guards.max_iterations, g.max_iterations);
  }
  res.c_values = cfg.mc.exp_c;
  res.checkpoint_times.reserve(chk_steps.size());
  for (auto m : chk_steps)
    res.checkpoint_times.push_back(static_cast<double>(m) * sc.h);

  std::vector<double> at_chk(n_traj);
  for (double c : res.c_values) {
    std::vector<ExpMomentEstimate> per_chk;
    for (std::size_t ci = 0; ci < chk_steps.size(); ++ci) {
      for (std::size_t t = 0; t < n_traj; ++t) at_chk[t] = sums[t][ci];
      per_chk.push_back(exp_moment(at_chk, c, sc.h));
    }
    res.at_checkpoints.push_back(per_chk);
    res.at_horizon.push_back(per_chk.back());
  }

  if (!cfg.output.dir.empty()) {
    std::filesystem::create_directories(cfg.output.dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.c_values.size(); ++i)
      rows.push_back({res.c_values[i], res.at_horizon[i].estimate,
                      res.at_horizon[i].std_error});
    res.csv_path = cfg.output.dir + "/exp_moment.csv";
    write_csv(res.csv_path, "c,estimate,stderr", rows);
    ordered_json chk = ordered_json::array();
    for (std::size_t i = 0; i < res.c_values.size(); ++i) {
      ordered_json per_c = ordered_json::array();
      for (std::size_t ci = 0; ci < res.checkpoint_times.size(); ++ci)
        per_c.push_back({{"t", res.checkpoint_times[ci]},
                         {"estimate", res.at_checkpoints[i][ci].estimate},
                         {"stderr", res.at_checkpoints[i][ci].std_error},
                         {"log_estimate", res.at_checkpoints[i][ci].log_estimate}});
      chk.push_back({{"c", res.c_values[i]}, {"checkpoints", per_c}});
    }
    ordered_json derived = {{"checkpoint_estimates", chk}};
    res.manifest_path = cfg.output.dir + "/manifest.json";
    write_manifest(res.manifest_path, "exp-moment", cfg, derived, res.guards,
                   {"exp_moment.csv"});
  }
  return res;
}

}  // namespace swe
