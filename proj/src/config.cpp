#include "mrbc/config.hpp"

#include "mrbc/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mrbc {

namespace {

using nlohmann::json;

const std::set<std::string> kChecks{"energy", "norms", "bkm", "gn", "hs"};
const std::set<std::string> kIcNames{"zero", "taylor-green", "thermal-blob", "random-band"};

void require_keys(const json &obj, const std::string &path, std::initializer_list<const char *> allowed) {
  if (!obj.is_object())
    throw ConfigError(path + ": expected an object");
  for (const auto &[key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }))
      throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
  }
}

template <typename T> T read(const json &obj, const std::string &path, const char *key, T fallback) {
  if (!obj.contains(key))
    return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception &) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

double read_p(const json &v, const std::string &path) {
  if (v.is_string() && (v == "inf" || v == "Inf" || v == "infinity"))
    return std::numeric_limits<double>::infinity();
  if (v.is_number())
    return v.get<double>();
  throw ConfigError(path + ": expected a number or \"inf\"");
}

} // namespace

bool DiagnosticsConfig::enabled(const std::string &check) const {
  return std::find(checks.begin(), checks.end(), check) != checks.end();
}

RunConfig parse_config(const std::string &text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(root, "", {"grid", "params", "integrator", "ic", "diagnostics", "output_dir"});
  RunConfig cfg;

  if (root.contains("grid")) {
    const json &g = root["grid"];
    require_keys(g, "grid", {"n", "length", "dealias_radius"});
    std::optional<double> radius;
    if (g.contains("dealias_radius"))
      radius = read<double>(g, "grid", "dealias_radius", 0.0);
    try {
      cfg.grid = Grid::make(read<int>(g, "grid", "n", 128), read<double>(g, "grid", "length", kTwoPi),
                            radius);
    } catch (const ContractError &e) {
      throw ConfigError(e.what());
    }
  }

  if (root.contains("params")) {
    const json &p = root["params"];
    require_keys(p, "params", {"kappa", "gamma", "mu"});
    cfg.params.kappa = read<double>(p, "params", "kappa", cfg.params.kappa);
    cfg.params.gamma = read<double>(p, "params", "gamma", cfg.params.gamma);
    cfg.params.mu = read<double>(p, "params", "mu", cfg.params.mu);
  }

  if (root.contains("integrator")) {
    const json &it = root["integrator"];
    require_keys(it, "integrator", {"scheme", "dt", "t_end", "cfl_safety"});
    const auto scheme = read<std::string>(it, "integrator", "scheme", "IFRK4");
    if (scheme == "IFRK4")
      cfg.integrator.scheme = Scheme::IFRK4;
    else if (scheme == "IFRK2")
      cfg.integrator.scheme = Scheme::IFRK2;
    else
      throw ConfigError("integrator.scheme: unknown scheme '" + scheme + "'");
    if (it.contains("dt")) {
      const json &dt = it["dt"];
      if (dt.is_string() && dt == "auto")
        cfg.integrator.dt.reset();
      else if (dt.is_number())
        cfg.integrator.dt = dt.get<double>();
      else
        throw ConfigError("integrator.dt: expected a number or \"auto\"");
    }
    cfg.integrator.t_end = read<double>(it, "integrator", "t_end", cfg.integrator.t_end);
    cfg.integrator.cfl_safety = read<double>(it, "integrator", "cfl_safety", cfg.integrator.cfl_safety);
  }

  if (root.contains("ic")) {
    const json &ic = root["ic"];
    require_keys(ic, "ic", {"name", "amplitude", "theta_amplitude", "width", "seed", "j0", "j1", "s", "norm"});
    cfg.ic.name = read<std::string>(ic, "ic", "name", cfg.ic.name);
    cfg.ic.amplitude = read<double>(ic, "ic", "amplitude", cfg.ic.amplitude);
    cfg.ic.theta_amplitude = read<double>(ic, "ic", "theta_amplitude", cfg.ic.theta_amplitude);
    cfg.ic.width = read<double>(ic, "ic", "width", cfg.ic.width);
    if (ic.contains("seed"))
      cfg.ic.seed = read<std::uint64_t>(ic, "ic", "seed", 0);
    cfg.ic.j0 = read<int>(ic, "ic", "j0", cfg.ic.j0);
    cfg.ic.j1 = read<int>(ic, "ic", "j1", cfg.ic.j1);
    cfg.ic.s = read<double>(ic, "ic", "s", cfg.ic.s);
    cfg.ic.norm = read<double>(ic, "ic", "norm", cfg.ic.norm);
  }

  if (root.contains("diagnostics")) {
    const json &d = root["diagnostics"];
    require_keys(d, "diagnostics", {"cadence", "checks", "p_norms", "s_values", "blowup_ceiling"});
    cfg.diagnostics.cadence = read<int>(d, "diagnostics", "cadence", cfg.diagnostics.cadence);
    if (d.contains("checks"))
      cfg.diagnostics.checks = read<std::vector<std::string>>(d, "diagnostics", "checks", {});
    if (d.contains("p_norms")) {
      if (!d["p_norms"].is_array())
        throw ConfigError("diagnostics.p_norms: expected an array");
      cfg.diagnostics.p_norms.clear();
      for (std::size_t i = 0; i < d["p_norms"].size(); ++i)
        cfg.diagnostics.p_norms.push_back(
            read_p(d["p_norms"][i], "diagnostics.p_norms[" + std::to_string(i) + "]"));
    }
    if (d.contains("s_values"))
      cfg.diagnostics.s_values = read<std::vector<double>>(d, "diagnostics", "s_values", {});
    cfg.diagnostics.blowup_ceiling =
        read<double>(d, "diagnostics", "blowup_ceiling", cfg.diagnostics.blowup_ceiling);
  }

  if (root.contains("output_dir"))
    cfg.output_dir = read<std::string>(root, "", "output_dir", "output");
  return cfg;
}

void validate(const RunConfig &cfg) {
  const Params &p = cfg.params;
  if (!(p.gamma > 0.0))
    throw ConfigError("params.gamma must be positive (hypothesis: γ > 0, μ > 0)");
  if (!(p.mu > 0.0))
    throw ConfigError("params.mu must be positive (hypothesis: γ > 0, μ > 0)");
  if (!(p.kappa >= 0.0))
    throw ConfigError("params.kappa must be >= 0");

  const IntegratorConfig &it = cfg.integrator;
  if (it.dt && !(*it.dt > 0.0))
    throw ConfigError("integrator.dt must be positive or \"auto\"");
  if (!(it.t_end > 0.0))
    throw ConfigError("integrator.t_end must be positive");
  if (!(it.cfl_safety > 0.0 && it.cfl_safety <= 1.0))
    throw ConfigError("integrator.cfl_safety must lie in (0, 1]");

  if (!kIcNames.count(cfg.ic.name))
    throw ConfigError("ic.name: unknown initial condition '" + cfg.ic.name + "'");
  if (cfg.ic.randomized() && !cfg.ic.seed)
    throw ConfigError("ic.seed: required for randomized initial condition '" + cfg.ic.name + "'");
  if (cfg.ic.randomized() && (cfg.ic.j0 < 0 || cfg.ic.j1 < cfg.ic.j0))
    throw ConfigError("ic.j0/ic.j1: need 0 <= j0 <= j1");

  const DiagnosticsConfig &d = cfg.diagnostics;
  if (d.cadence < 1)
    throw ConfigError("diagnostics.cadence must be >= 1");
  for (const auto &c : d.checks)
    if (!kChecks.count(c))
      throw ConfigError("diagnostics.checks: unknown check '" + c + "'");
  for (double p_norm : d.p_norms)
    if (!(p_norm >= 1.0))
      throw ConfigError("diagnostics.p_norms: entries must be >= 1");
  for (double s : d.s_values)
    if (!(s >= 0.0))
      throw ConfigError("diagnostics.s_values: entries must be >= 0");
  if (!(d.blowup_ceiling > 0.0))
    throw ConfigError("diagnostics.blowup_ceiling must be positive");
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig cfg = parse_config(buffer.str());
  validate(cfg);
  return cfg;
}

} // namespace mrbc
