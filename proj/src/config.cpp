#include "swe/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "swe/spectral.hpp"
#include "swe/toml.hpp"

namespace swe {

SpectralField InitialData::build(int dim, int n) const {
  switch (kind) {
    case Kind::zero:
      return SpectralField(dim, n);
    case Kind::constant:
      return project_constant(value, dim, n);
    case Kind::mode: {
      SpectralField f(dim, n);
      if (k > n || (dim == 2 && l > n))
        throw std::invalid_argument("initial mode outside truncation");
      if (dim == 1)
        f.at(k) = value;
      else
        f.at(k, l) = value;
      return f;
    }
  }
  throw std::logic_error("unreachable");
}

std::string InitialData::describe() const {
  std::ostringstream ss;
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::constant:
      ss << "constant " << value;
      return ss.str();
    case Kind::mode:
      ss << "mode " << k << " " << l << " " << value;
      return ss.str();
  }
  return "";
}

InitialData InitialData::parse(const std::string& text) {
  std::istringstream ss(text);
  std::string word;
  ss >> word;
  InitialData d;
  if (word == "zero") {
    d.kind = Kind::zero;
    return d;
  }
  if (word == "constant") {
    d.kind = Kind::constant;
    if (!(ss >> d.value))
      throw std::invalid_argument("initial data: expected 'constant <value>'");
    return d;
  }
  if (word == "mode") {
    d.kind = Kind::mode;
    std::vector<double> nums;
    double x;
    while (ss >> x) nums.push_back(x);
    if (nums.size() == 2) {
      d.k = static_cast<int>(nums[0]);
      d.l = 1;
      d.value = nums[1];
    } else if (nums.size() == 3) {
      d.k = static_cast<int>(nums[0]);
      d.l = static_cast<int>(nums[1]);
      d.value = nums[2];
    } else {
      throw std::invalid_argument("initial data: expected 'mode k [l] amplitude'");
    }
    return d;
  }
  throw std::invalid_argument("initial data: unknown kind '" + word + "'");
}

NoiseSpectrum NoiseConfig::build(int dim, int n_max) const {
  switch (family) {
    case Family::power1d:
      if (dim != 1)
        throw std::invalid_argument("power1d spectrum requires dim = 1");
      return NoiseSpectrum::power1d(p, n_max);
    case Family::power2d:
      if (dim != 2)
        throw std::invalid_argument("power2d spectrum requires dim = 2");
      return NoiseSpectrum::power2d(p, n_max);
    case Family::file:
      return NoiseSpectrum::from_file(file, dim, n_max);
    case Family::zero:
      return NoiseSpectrum(
          dim, n_max,
          std::vector<double>(
              static_cast<std::size_t>(SpectralField::size_for(dim, n_max)), 0.0),
          beta);
  }
  throw std::logic_error("unreachable");
}

SchemeConfig SchemeSection::scheme(double T) const { return scheme(T, h, n); }

SchemeConfig SchemeSection::scheme(double T, double h_override,
                                   int n_override) const {
  SchemeConfig c;
  c.h = h_override;
  c.n = n_override;
  c.T = T;
  c.solver = solver;
  c.tol = tol;
  c.max_iter = max_iter;
  c.epsilon = epsilon;
  return c;
}

int dyadic_level(double T, double h) {
  const double ratio = T / h;
  const double lvl = std::log2(ratio);
  const int l = static_cast<int>(std::llround(lvl));
  if (l < 0 || l > 30 || std::abs(ratio - std::ldexp(1.0, l)) > 1e-6 * ratio)
    throw std::invalid_argument(
        "step size must divide the horizon into 2^l steps");
  return l;
}

void ExperimentConfig::validate() const {
  if (model.dim != 1 && model.dim != 2)
    throw std::invalid_argument("model dim must be 1 or 2");
  model.polynomial();  // enforces c3 > 0
  if (!(model.T > 0.0)) throw std::invalid_argument("horizon must be positive");
  scheme.scheme(model.T).validate();
  dyadic_level(model.T, scheme.h);
  if (scheme.h_ref > 0.0) {
    const int lref = dyadic_level(model.T, scheme.h_ref);
    for (double h : scheme.h_list) {
      const int lh = dyadic_level(model.T, h);
      if (lh >= lref)
        throw std::invalid_argument(
            "every studied step size must be coarser than the reference");
    }
  }
  if (scheme.n_ref > 0)
    for (int nn : scheme.n_list)
      if (nn >= scheme.n_ref)
        throw std::invalid_argument(
            "every studied truncation must be below the reference");
  if (mc.trajectories < 1)
    throw std::invalid_argument("need at least one trajectory");
  if (mc.error_moment != 1 && mc.error_moment != 2)
    throw std::invalid_argument("error_moment must be 1 or 2");
  for (double t : output.sample_times)
    if (t < 0.0 || t > model.T + 1e-12)
      throw std::invalid_argument("sample times must lie in [0, T]");
}

ExperimentConfig ExperimentConfig::defaults() { return {}; }

namespace {

using toml::Table;
using toml::Value;

void reject_unknown(const Table& t, const std::set<std::string>& known,
                    const std::string& section) {
  for (const auto& [k, v] : t)
    if (!known.count(k))
      throw std::runtime_error("unknown key '" + k + "' in [" + section + "]");
}

const Value* find(const Table& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

std::vector<double> as_double_list(const Value& v) {
  std::vector<double> out;
  for (const auto& e : v.as_array()) out.push_back(e.as_double());
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_toml_text(const std::string& text) {
  const toml::Document doc = toml::parse(text);
  for (const auto& [name, tab] : doc) {
    (void)tab;
    if (name != "model" && name != "noise" && name != "scheme" && name != "mc" &&
        name != "output")
      throw std::runtime_error(name.empty() ? "keys outside any section"
                                            : "unknown section [" + name + "]");
  }
  ExperimentConfig cfg;
  if (auto it = doc.find("model"); it != doc.end()) {
    const Table& t = it->second;
    reject_unknown(t, {"dim", "c3", "c2", "c1", "c0", "u0", "v0", "T"}, "model");
    if (auto* v = find(t, "dim")) cfg.model.dim = static_cast<int>(v->as_int());
    if (auto* v = find(t, "c3")) cfg.model.c3 = v->as_double();
    if (auto* v = find(t, "c2")) cfg.model.c2 = v->as_double();
    if (auto* v = find(t, "c1")) cfg.model.c1 = v->as_double();
    if (auto* v = find(t, "c0")) cfg.model.c0 = v->as_double();
    if (auto* v = find(t, "u0")) cfg.model.u0 = InitialData::parse(v->as_string());
    if (auto* v = find(t, "v0")) cfg.model.v0 = InitialData::parse(v->as_string());
    if (auto* v = find(t, "T")) cfg.model.T = v->as_double();
  }

  if (auto it = doc.find("noise"); it != doc.end()) {
    const Table& t = it->second;
    reject_unknown(t, {"family", "p", "file", "level", "beta", "max_path_bytes"},
                   "noise");
    if (auto* v = find(t, "family")) {
      const std::string& f = v->as_string();
      if (f == "power1d")
        cfg.noise.family = NoiseConfig::Family::power1d;
      else if (f == "power2d")
        cfg.noise.family = NoiseConfig::Family::power2d;
      else if (f == "file")
        cfg.noise.family = NoiseConfig::Family::file;
      else if (f == "zero")
        cfg.noise.family = NoiseConfig::Family::zero;
      else
        throw std::runtime_error("unknown noise family '" + f + "'");
    }
    if (auto* v = find(t, "p")) cfg.noise.p = v->as_double();
    if (auto* v = find(t, "file")) cfg.noise.file = v->as_string();
    if (auto* v = find(t, "level")) cfg.noise.level = static_cast<int>(v->as_int());
    if (auto* v = find(t, "beta")) cfg.noise.beta = v->as_double();
    if (auto* v = find(t, "max_path_bytes"))
      cfg.noise.max_path_bytes = static_cast<std::uint64_t>(v->as_int());
  }

  if (auto it = doc.find("scheme"); it != doc.end()) {
    const Table& t = it->second;
    reject_unknown(t,
                   {"h", "n", "solver", "tol", "max_iter", "epsilon", "h_list",
                    "h_ref", "n_list", "n_ref"},
                   "scheme");
    if (auto* v = find(t, "h")) cfg.scheme.h = v->as_double();
    if (auto* v = find(t, "n")) cfg.scheme.n = static_cast<int>(v->as_int());
    if (auto* v = find(t, "solver")) {
      const std::string& s = v->as_string();
      if (s == "iteration1")
        cfg.scheme.solver = Solver::iteration1;
      else if (s == "iteration2")
        cfg.scheme.solver = Solver::iteration2;
      else
        throw std::runtime_error("unknown solver '" + s + "'");
    }
    if (auto* v = find(t, "tol")) cfg.scheme.tol = v->as_double();
    if (auto* v = find(t, "max_iter"))
      cfg.scheme.max_iter = static_cast<int>(v->as_int());
    if (auto* v = find(t, "epsilon")) cfg.scheme.epsilon = v->as_double();
    if (auto* v = find(t, "h_list")) cfg.scheme.h_list = as_double_list(*v);
    if (auto* v = find(t, "h_ref")) cfg.scheme.h_ref = v->as_double();
    if (auto* v = find(t, "n_list")) {
      cfg.scheme.n_list.clear();
      for (const auto& e : v->as_array())
        cfg.scheme.n_list.push_back(static_cast<int>(e.as_int()));
    }
    if (auto* v = find(t, "n_ref")) cfg.scheme.n_ref = static_cast<int>(v->as_int());
  }

  if (auto it = doc.find("mc"); it != doc.end()) {
    const Table& t = it->second;
    reject_unknown(t, {"trajectories", "seed", "workers", "error_moment", "exp_c"},
                   "mc");
    if (auto* v = find(t, "trajectories"))
      cfg.mc.trajectories = static_cast<int>(v->as_int());
    if (auto* v = find(t, "seed"))
      cfg.mc.seed = static_cast<std::uint64_t>(v->as_int());
    if (auto* v = find(t, "workers")) cfg.mc.workers = static_cast<int>(v->as_int());
    if (auto* v = find(t, "error_moment"))
      cfg.mc.error_moment = static_cast<int>(v->as_int());
    if (auto* v = find(t, "exp_c")) cfg.mc.exp_c = as_double_list(*v);
  }

  if (auto it = doc.find("output"); it != doc.end()) {
    const Table& t = it->second;
    reject_unknown(t, {"dir", "sample_times"}, "output");
    if (auto* v = find(t, "dir")) cfg.output.dir = v->as_string();
    if (auto* v = find(t, "sample_times"))
      cfg.output.sample_times = as_double_list(*v);
  }

  cfg.validate();
  return cfg;
}

namespace {

using nlohmann::ordered_json;

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["model"] = {{"dim", c.model.dim}, {"c3", c.model.c3}, {"c2", c.model.c2},
                {"c1", c.model.c1},   {"c0", c.model.c0},
                {"u0", c.model.u0.describe()}, {"v0", c.model.v0.describe()},
                {"T", c.model.T}};
  const char* fam = nullptr;
  switch (c.noise.family) {
    case NoiseConfig::Family::power1d: fam = "power1d"; break;
    case NoiseConfig::Family::power2d: fam = "power2d"; break;
    case NoiseConfig::Family::file: fam = "file"; break;
    case NoiseConfig::Family::zero: fam = "zero"; break;
  }
  j["noise"] = {{"family", fam},
                {"p", c.noise.p},
                {"file", c.noise.file},
                {"level", c.noise.level},
                {"max_path_bytes", c.noise.max_path_bytes}};
  if (c.noise.beta) j["noise"]["beta"] = *c.noise.beta;
  j["scheme"] = {{"h", c.scheme.h},
                 {"n", c.scheme.n},
                 {"solver", c.scheme.solver == Solver::iteration1 ? "iteration1"
                                                                  : "iteration2"},
                 {"tol", c.scheme.tol},
                 {"max_iter", c.scheme.max_iter},
                 {"epsilon", c.scheme.epsilon},
                 {"h_list", c.scheme.h_list},
                 {"h_ref", c.scheme.h_ref},
                 {"n_list", c.scheme.n_list},
                 {"n_ref", c.scheme.n_ref}};
  j["mc"] = {{"trajectories", c.mc.trajectories},
             {"seed", c.mc.seed},
             {"workers", c.mc.workers},
             {"error_moment", c.mc.error_moment},
             {"exp_c", c.mc.exp_c}};
  j["output"] = {{"dir", c.output.dir}, {"sample_times", c.output.sample_times}};
  return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
  ExperimentConfig c;
  const auto& m = j.at("model");
  c.model.dim = m.at("dim").get<int>();
  c.model.c3 = m.at("c3").get<double>();
  c.model.c2 = m.at("c2").get<double>();
  c.model.c1 = m.at("c1").get<double>();
  c.model.c0 = m.at("c0").get<double>();
  c.model.u0 = InitialData::parse(m.at("u0").get<std::string>());
  c.model.v0 = InitialData::parse(m.at("v0").get<std::string>());
  c.model.T = m.at("T").get<double>();
  const auto& nz = j.at("noise");
  const std::string fam = nz.at("family").get<std::string>();
  if (fam == "power1d") c.noise.family = NoiseConfig::Family::power1d;
  else if (fam == "power2d") c.noise.family = NoiseConfig::Family::power2d;
  else if (fam == "file") c.noise.family = NoiseConfig::Family::file;
  else if (fam == "zero") c.noise.family = NoiseConfig::Family::zero;
  else throw std::runtime_error("unknown noise family in manifest");
  c.noise.p = nz.at("p").get<double>();
  c.noise.file = nz.at("file").get<std::string>();
  c.noise.level = nz.at("level").get<int>();
  c.noise.max_path_bytes = nz.at("max_path_bytes").get<std::uint64_t>();
  if (nz.contains("beta")) c.noise.beta = nz.at("beta").get<double>();
  const auto& s = j.at("scheme");
  c.scheme.h = s.at("h").get<double>();
  c.scheme.n = s.at("n").get<int>();
  c.scheme.solver = s.at("solver").get<std::string>() == "iteration2"
                        ? Solver::iteration2
                        : Solver::iteration1;
  c.scheme.tol = s.at("tol").get<double>();
  c.scheme.max_iter = s.at("max_iter").get<int>();
  c.scheme.epsilon = s.at("epsilon").get<double>();
  c.scheme.h_list = s.at("h_list").get<std::vector<double>>();
  c.scheme.h_ref = s.at("h_ref").get<double>();
  c.scheme.n_list = s.at("n_list").get<std::vector<int>>();
  c.scheme.n_ref = s.at("n_ref").get<int>();
  const auto& mc = j.at("mc");
  c.mc.trajectories = mc.at("trajectories").get<int>();
  c.mc.seed = mc.at("seed").get<std::uint64_t>();
  c.mc.workers = mc.at("workers").get<int>();
  c.mc.error_moment = mc.at("error_moment").get<int>();
  c.mc.exp_c = mc.at("exp_c").get<std::vector<double>>();
  const auto& o = j.at("output");
  c.output.dir = o.at("dir").get<std::string>();
  c.output.sample_times = o.at("sample_times").get<std::vector<double>>();
  c.validate();
  return c;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  return config_to_json(*this).dump(2);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  // accept either a bare config object or a manifest embedding one
  if (j.contains("config")) return config_from_json(j.at("config"));
  return config_from_json(j);
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return from_json_text(text);
  return from_toml_text(text);
}

}  // namespace swe
