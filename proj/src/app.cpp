#include "mrbc/app.hpp"

#include "mrbc/csv.hpp"
#include "mrbc/errors.hpp"
#include "mrbc/initial_conditions.hpp"
#include "mrbc/paley.hpp"
#include "mrbc/snapshot.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace mrbc::app {

namespace {

double max_abs(const SpectralField &f) {
  double m = 0.0;
  for (const auto &c : f.coeffs())
    m = std::max(m, std::abs(c));
  return m;
}

double max_abs_diff(const SpectralField &a, const SpectralField &b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.coeffs().size(); ++k)
    m = std::max(m, std::abs(a.coeffs()[k] - b.coeffs()[k]));
  return m;
}

double max_abs_diff(const SpectralVector &a, const SpectralVector &b) {
  return std::max(max_abs_diff(a.x1, b.x1), max_abs_diff(a.x2, b.x2));
}

double max_abs(const SpectralVector &v) { return std::max(max_abs(v.x1), max_abs(v.x2)); }

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : num; }

State random_state(const Grid &grid, std::uint64_t seed) {
  IcSpec spec;
  spec.name = "random-band";
  spec.seed = seed;
  spec.j0 = 0;
  spec.j1 = std::max(0, static_cast<int>(std::floor(std::log2(grid.dealias_radius() * grid.k_scale()))));
  spec.s = 1.0;
  spec.norm = 1.0;
  return make_ic(spec, grid);
}

PhysicalVector physical(const SpectralVector &v) {
  auto [a, b] = to_physical_pair(v.x1, v.x2);
  return {std::move(a), std::move(b)};
}

SpectralField single_mode(const Grid &g, int m1, int m2, double amplitude) {
  SpectralField f(g);
  f.at(m1, m2) += 0.5 * amplitude;
  f.at(-m1, -m2) += 0.5 * amplitude;
  return f;
}

} // namespace

std::vector<CheckResult> identity_suite(const Grid &grid, double kappa, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const State s = random_state(grid, seed);
  const SpectralVector v{s.omega_small, s.theta};

  const SpectralVector pv = helmholtz_project(v);
  out.push_back({"helmholtz idempotence", safe_ratio(max_abs_diff(helmholtz_project(pv), pv), max_abs(v)), 1e-13});
  const SpectralVector grad{derivative(s.theta, 1), derivative(s.theta, 2)};
  out.push_back({"helmholtz annihilates gradients", safe_ratio(max_abs(helmholtz_project(grad)), max_abs(grad)), 1e-13});

  const double n_cut = 0.25 * grid.n() * grid.k_scale();
  const SpectralVector jv = friedrichs_cutoff(v, n_cut);
  out.push_back({"cutoff idempotence", safe_ratio(max_abs_diff(friedrichs_cutoff(jv, n_cut), jv), max_abs(v)), 1e-14});
  out.push_back({"cutoff commutes with projection",
                 safe_ratio(max_abs_diff(friedrichs_cutoff(pv, n_cut), helmholtz_project(jv)), max_abs(v)), 1e-14});

  const auto part = paley::DyadicPartition::build(grid);
  double unity = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double sum = 0.0;
    for (int j = -1; j <= part.j_max(); ++j)
      sum += part.multiplier(j, idx);
    unity = std::max(unity, std::abs(sum - 1.0));
  }
  out.push_back({"partition of unity", unity, 1e-12});

  std::vector<SpectralField> blocks;
  SpectralField rebuilt(grid);
  for (int j = -1; j <= part.j_max(); ++j) {
    blocks.push_back(paley::dyadic_block(s.theta, j, part));
    rebuilt += blocks.back();
  }
  out.push_back({"dyadic reconstruction", safe_ratio(max_abs_diff(rebuilt, s.theta), max_abs(s.theta)), 1e-12});

  double cross = 0.0;
  for (int j = -1; j <= part.j_max(); ++j)
    for (int q = -1; q <= part.j_max(); ++q)
      if (std::abs(j - q) >= 2)
        cross = std::max(cross, max_abs(paley::dyadic_block(blocks[q + 1], j, part)));
  out.push_back({"separated blocks are orthogonal", safe_ratio(cross, max_abs(s.theta)), 0.0});

  const SpectralVector u = s.velocity();
  const PhysicalVector up = physical(u);
  const SpectralField adv = advect(up, s.theta);
  out.push_back({"advection antisymmetry",
                 safe_ratio(std::abs(inner(adv, s.theta)), l2_norm(adv) * l2_norm(s.theta)), 1e-11});

  const double k = kappa > 0.0 ? kappa : 1.0;
  const SpectralVector curl_omega{derivative(s.omega_small, 2), -1.0 * derivative(s.omega_small, 1)};
  const double lhs = 2.0 * k * (inner(curl_omega.x1, u.x1) + inner(curl_omega.x2, u.x2));
  const double rhs = 2.0 * k * inner(s.omega_big, s.omega_small);
  out.push_back({"coupling exchange symmetry",
                 safe_ratio(std::abs(lhs - rhs), 2.0 * k * l2_norm(s.omega_big) * l2_norm(s.omega_small)), 1e-11});
  return out;
}

std::vector<CheckResult> exact_linear_suite(const Grid &grid, const Params &params) {
  std::vector<CheckResult> out;
  const double dt = 0.05;
  const int steps = 10;

  Params heat{0.0, params.gamma, params.mu, Terms{false, false, false, false}};
  for (Scheme scheme : {Scheme::IFRK2, Scheme::IFRK4}) {
    State s = State::zero(grid);
    s.theta = single_mode(grid, 3, -2, 1.0);
    s.omega_small = single_mode(grid, 1, 4, 0.5);
    const double k_theta = 13.0 * grid.k_scale() * grid.k_scale();
    const double k_omega = 17.0 * grid.k_scale() * grid.k_scale();
    double err = 0.0;
    for (int i = 0; i < steps; ++i) {
      const State next = step(s, dt, heat, scheme);
      const Complex t0 = s.theta.at(3, -2), t1 = next.theta.at(3, -2);
      const Complex w0 = s.omega_small.at(1, 4), w1 = next.omega_small.at(1, 4);
      err = std::max(err, std::abs(t1 - std::exp(-heat.mu * k_theta * dt) * t0) / std::abs(t0));
      err = std::max(err, std::abs(w1 - std::exp(-heat.gamma * k_omega * dt) * w0) / std::abs(w0));
      s = next;
    }
    out.push_back({std::string("heat decay per step (") + (scheme == Scheme::IFRK2 ? "IFRK2" : "IFRK4") + ")",
                   err, 1e-13});
  }

  Params full = params;
  full.terms = Terms{};
  const double kappa = full.kappa > 0.0 ? full.kappa : 0.5;
  full.kappa = kappa;
  State s = State::zero(grid);
  const double u1 = 0.3, u2 = -0.2, tb = 0.7, wb = 0.4;
  s.mean_u = {u1, u2};
  s.theta.coeffs()[0] = tb;
  s.omega_small.coeffs()[0] = wb;
  double err = 0.0;
  for (int i = 1; i <= steps; ++i) {
    s = step(s, dt, full, Scheme::IFRK4);
    const double t = i * dt;
    err = std::max({err, std::abs(s.mean_u.first - u1),
                    std::abs(s.mean_u.second - (u2 * std::cosh(t) + tb * std::sinh(t))),
                    std::abs(s.theta.mean().real() - (tb * std::cosh(t) + u2 * std::sinh(t))),
                    std::abs(s.omega_small.mean().real() - wb * std::exp(-4.0 * kappa * t))});
  }
  out.push_back({"mean modes closed form", err, 1e-13});
  return out;
}

std::vector<CheckResult> z_identity_suite(const Grid &grid, const Params &params, std::uint64_t seed,
                                          int states) {
  double err = 0.0;
  const ZCoefficients c = z_source_coefficients(params);
  for (int i = 0; i < states; ++i) {
    State s = random_state(grid, seed + static_cast<std::uint64_t>(i));
    s.omega_small.coeffs()[0] = 0.1 * (i + 1);
    s.theta.coeffs()[0] = -0.05 * i;
    s.mean_u = {0.1 * i, -0.2};
    const SpectralField rz = rhs_Z(s, params);
    SpectralField closed = derivative(s.theta, 1);
    closed.axpy(c.z, compute_Z(s, params));
    closed.axpy(c.omega, s.omega_small);
    err = std::max(err, safe_ratio(max_abs_diff(rz, closed), max_abs(rz)));
  }
  return {{"Z source closed form", err, 1e-11}};
}

RunResult run_simulation(const RunConfig &cfg, std::ostream &log, bool quiet) {
  validate(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path csv_path = cfg.output_dir / "diagnostics.csv";
  std::ofstream csv_file(csv_path, std::ios::binary);
  if (!csv_file)
    throw ConfigError("cannot write " + csv_path.string());

  const State initial = make_ic(cfg.ic, cfg.grid);
  auto write_fields = [&](const State &s, const std::string &prefix) {
    write_snapshot(cfg.output_dir / (prefix + "Omega.bin"), to_physical(s.omega_big), "Omega", s.time);
    write_snapshot(cfg.output_dir / (prefix + "omega.bin"), to_physical(s.omega_small), "omega", s.time);
    write_snapshot(cfg.output_dir / (prefix + "theta.bin"), to_physical(s.theta), "theta", s.time);
  };
  write_fields(initial, "initial_");

  DiagnosticsCsv csv(csv_file, cfg.diagnostics, cfg.params);
  const bool energy = cfg.diagnostics.enabled("energy");
  diag::EnergyLedger ledger(cfg.params);

  RunHooks hooks;
  hooks.cadence = cfg.diagnostics.cadence;
  if (energy)
    hooks.on_step = [&](const State &before, const State &after, double dt, long) {
      ledger.record(before, after, dt);
    };
  hooks.on_sample = [&](const State &s, long step_index) {
    const double monitor = diag::blowup_monitor(s);
    if (diag::blowup_flagged(monitor, cfg.diagnostics.blowup_ceiling)) {
      std::ostringstream msg;
      msg << "integration failure at t = " << s.time << ": max |grad theta| = " << monitor
          << " exceeds the blow-up ceiling " << cfg.diagnostics.blowup_ceiling;
      throw IntegrationFailure(s.time, "theta", msg.str());
    }
    csv.sample(s, step_index, energy ? &ledger : nullptr);
    if (!quiet)
      log << "t = " << s.time << "  step " << step_index << "  max|grad theta| = " << monitor << '\n';
  };

  RunResult result{run(initial, cfg.params, cfg.integrator, hooks),
                   energy ? ledger.initial_energy() : 0.0, energy ? ledger.cumulative_defect() : 0.0,
                   csv_path};
  csv_file.flush();
  write_fields(result.summary.final_state, "final_");
  if (!quiet)
    log << "done: " << result.summary.steps << " steps of dt = " << result.summary.dt << ", wrote "
        << result.csv_path.string() << '\n';
  return result;
}

diag::TwinReport run_twin(const RunConfig &cfg, double eps, std::ostream &log, bool quiet) {
  validate(cfg);
  const State a = make_ic(cfg.ic, cfg.grid);
  State b = a;
  b.theta += single_mode(cfg.grid, 1, 0, eps);
  const diag::TwinReport report = diag::twin_run_stability(a, b, cfg.params, cfg.integrator);

  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream csv(cfg.output_dir / "twin.csv", std::ios::binary);
  csv << "time,distance,rate\n";
  for (const auto &row : report.rows)
    csv << format_number(row.time) << ',' << format_number(row.distance) << ',' << format_number(row.rate)
        << '\n';
  if (!quiet)
    log << "twin: " << report.rows.size() << " samples, gronwall rate " << report.gronwall_rate
        << ", worst excess " << report.worst_excess << '\n';
  return report;
}

namespace {

int report_checks(const std::vector<CheckResult> &results, std::ostream &log) {
  bool ok = true;
  for (const auto &r : results) {
    log << (r.pass() ? "PASS " : "FAIL ") << r.name << ": " << r.value << " (tolerance " << r.tolerance
        << ")\n";
    ok = ok && r.pass();
  }
  return ok ? kExitOk : kExitInvariant;
}

double parse_exponent(const std::string &text) {
  if (text == "inf" || text == "Inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != text.size() || !(v >= 1.0))
    throw ConfigError("--p: expected a number >= 1 or \"inf\", got '" + text + "'");
  return v;
}

} // namespace

int main_entry(int argc, char **argv) {
  CLI::App cli{"Pseudo-spectral solver and diagnostics for the micropolar Rayleigh-Benard system"};
  cli.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> cadence;
  bool quiet = false;
  auto add_overrides = [&](CLI::App *sub) {
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("--output-dir", output_dir, "output directory");
    sub->add_option("--seed", seed, "initial-condition seed");
    sub->add_option("--cadence", cadence, "diagnostic sampling cadence in steps");
    sub->add_flag("--quiet", quiet, "suppress progress output");
  };

  CLI::App *run_cmd = cli.add_subcommand("run", "simulate and write diagnostics");
  add_overrides(run_cmd);
  CLI::App *check_cmd = cli.add_subcommand("check", "run the identity and invariant suites");
  add_overrides(check_cmd);
  CLI::App *twin_cmd = cli.add_subcommand("twin", "twin-run stability");
  add_overrides(twin_cmd);
  double eps = 1e-8;
  twin_cmd->add_option("--eps", eps, "perturbation amplitude")->check(CLI::PositiveNumber);

  CLI::App *norms_cmd = cli.add_subcommand("norms", "norms of a snapshot");
  std::string snapshot_path;
  double s_index = 2.5;
  std::string p_text = "2";
  norms_cmd->add_option("snapshot", snapshot_path, "snapshot file")->required();
  norms_cmd->add_option("--s", s_index, "smoothness index");
  norms_cmd->add_option("--p", p_text, "integrability exponent (number or inf)");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return cli.exit(e);
  } catch (const CLI::ParseError &e) {
    cli.exit(e);
    return kExitConfig;
  }

  auto load = [&]() {
    RunConfig cfg = parse_config([&] {
      std::ifstream in(config_path);
      if (!in)
        throw ConfigError("cannot open config file " + config_path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      return buffer.str();
    }());
    if (output_dir)
      cfg.output_dir = *output_dir;
    if (seed)
      cfg.ic.seed = *seed;
    if (cadence)
      cfg.diagnostics.cadence = *cadence;
    validate(cfg);
    return cfg;
  };

  try {
    if (run_cmd->parsed()) {
      run_simulation(load(), std::cout, quiet);
      return kExitOk;
    }
    if (check_cmd->parsed()) {
      const RunConfig cfg = load();
      std::vector<CheckResult> all = identity_suite(cfg.grid, cfg.params.kappa, cfg.ic.seed.value_or(1));
      for (auto &r : exact_linear_suite(cfg.grid, cfg.params))
        all.push_back(r);
      for (auto &r : z_identity_suite(cfg.grid, cfg.params, cfg.ic.seed.value_or(1), 3))
        all.push_back(r);
      return report_checks(all, std::cout);
    }
    if (twin_cmd->parsed()) {
      const diag::TwinReport report = run_twin(load(), eps, std::cout, quiet);
      if (report.worst_excess > 0.0) {
        std::cerr << "twin: distance growth exceeds the Gronwall line by " << report.worst_excess << '\n';
        return kExitInvariant;
      }
      return kExitOk;
    }
    if (norms_cmd->parsed()) {
      const double p = parse_exponent(p_text);
      const Snapshot snap = read_snapshot(snapshot_path);
      const SpectralField f = to_spectral(snap.field);
      const auto part = paley::DyadicPartition::build(f.grid());
      std::cout << "field " << snap.field_name << " at t = " << format_number(snap.time) << '\n'
                << "L^" << p_text << " " << format_number(lp_norm(snap.field, p)) << '\n'
                << "H^" << format_index(s_index) << " " << format_number(paley::sobolev_norm(f, s_index)) << '\n'
                << "B^" << format_index(s_index) << "_{" << p_text << ",2} "
                << format_number(paley::besov_norm(f, {s_index, p, 2.0}, part)) << '\n'
                << "B^" << format_index(s_index) << "_{" << p_text << ",inf} "
                << format_number(paley::besov_norm(f, {s_index, p, paley::kInf}, part)) << '\n';
      return kExitOk;
    }
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IntegrationFailure &e) {
    std::cerr << e.what() << '\n';
    return kExitIntegration;
  } catch (const InvariantViolation &e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

} // namespace mrbc::app
