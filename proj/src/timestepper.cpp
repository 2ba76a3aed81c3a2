#include "mrbc/timestepper.hpp"

#include "mrbc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mrbc {

int scheme_order(Scheme s) { return s == Scheme::IFRK2 ? 2 : 4; }

void IntegratorConfig::validate() const {
  if (dt && !(*dt > 0.0))
    throw ContractError("integrator: dt must be positive");
  if (!(t_end > 0.0))
    throw ContractError("integrator: t_end must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw ContractError("integrator: cfl_safety must lie in (0, 1]");
}

namespace {

// exp(-coeff |k|^2 tau) per coefficient.
std::vector<double> decay_factors(const Grid &g, double coeff, double tau) {
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    out[k] = std::exp(-coeff * g.k_squared(k) * tau);
  return out;
}

struct Factors {
  std::vector<double> omega;
  std::vector<double> theta;

  Factors(const Grid &g, const Params &p, double tau)
      : omega(decay_factors(g, p.gamma, tau)), theta(decay_factors(g, p.mu, tau)) {}
};

void scale(SpectralField &f, const std::vector<double> &factor) {
  auto c = f.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] *= factor[k];
}

// The part of the state the explicit scheme advances: fluctuations only.
struct Fields {
  SpectralField big, small, theta;

  Fields &axpy(double a, const Fields &o) {
    big.axpy(a, o.big);
    small.axpy(a, o.small);
    theta.axpy(a, o.theta);
    return *this;
  }
  Fields &apply(const Factors &f) {
    scale(small, f.omega);
    scale(theta, f.theta);
    return *this;
  }
};

Fields fields_of(const State &s) { return {s.omega_big, s.omega_small, s.theta}; }

Fields explicit_tendency(const State &s, const Params &p) {
  Tendency t = rhs_explicit(s, p);
  // Means follow the exact flow; their tendencies are carried separately.
  t.d_omega_small.coeffs()[0] = 0.0;
  t.d_theta.coeffs()[0] = 0.0;
  t.d_omega_big.coeffs()[0] = 0.0;
  return {std::move(t.d_omega_big), std::move(t.d_omega_small), std::move(t.d_theta)};
}

State make_state(Fields f, const MeanModes &m, double time) {
  f.small.coeffs()[0] = m.omega_bar;
  f.theta.coeffs()[0] = m.theta_bar;
  f.big.coeffs()[0] = 0.0;
  return State{std::move(f.big), std::move(f.small), std::move(f.theta), m.mean_u, time};
}

void require_finite(const State &s) {
  auto check = [&](const SpectralField &f, const char *name) {
    for (const auto &c : f.coeffs())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        std::ostringstream msg;
        msg << "integration failure at t = " << s.time << ": non-finite values in " << name;
        throw IntegrationFailure(s.time, name, msg.str());
      }
  };
  check(s.omega_big, "Omega");
  check(s.omega_small, "omega");
  check(s.theta, "theta");
  if (!std::isfinite(s.mean_u.first) || !std::isfinite(s.mean_u.second)) {
    std::ostringstream msg;
    msg << "integration failure at t = " << s.time << ": non-finite mean velocity";
    throw IntegrationFailure(s.time, "mean_u", msg.str());
  }
}

} // namespace

State step(const State &state, double dt, const Params &p, Scheme scheme) {
  if (!(dt > 0.0))
    throw ContractError("step: dt must be positive");
  const Grid &g = state.grid();
  const double theta_bar = state.theta.mean().real();
  const double omega_bar = state.omega_small.mean().real();
  auto means_at = [&](double tau) {
    return mean_mode_flow(state.mean_u, theta_bar, omega_bar, p, tau);
  };

  const Fields y = fields_of(state);
  const Factors full(g, p, dt);
  Fields next = y;

  if (scheme == Scheme::IFRK2) {
    const Fields k1 = explicit_tendency(state, p);
    Fields y2 = y;
    y2.axpy(dt, k1).apply(full);
    const Fields k2 = explicit_tendency(make_state(std::move(y2), means_at(dt), state.time + dt), p);
    next.axpy(0.5 * dt, k1).apply(full).axpy(0.5 * dt, k2);
  } else {
    const Factors half(g, p, 0.5 * dt);
    const MeanModes m_half = means_at(0.5 * dt);

    const Fields k1 = explicit_tendency(state, p);
    Fields y2 = y;
    y2.axpy(0.5 * dt, k1).apply(half);
    const Fields k2 = explicit_tendency(make_state(std::move(y2), m_half, state.time + 0.5 * dt), p);

    Fields y3 = y;
    y3.apply(half).axpy(0.5 * dt, k2);
    const Fields k3 = explicit_tendency(make_state(std::move(y3), m_half, state.time + 0.5 * dt), p);

    Fields k3h = k3;
    k3h.apply(half);
    Fields y4 = y;
    y4.apply(full).axpy(dt, k3h);
    const Fields k4 = explicit_tendency(make_state(std::move(y4), means_at(dt), state.time + dt), p);

    // E y + dt/6 (E k1 + 2 E_half (k2 + k3) + k4)
    Fields mid = k2;
    mid.axpy(1.0, k3).apply(half);
    next.axpy(dt / 6.0, k1).apply(full).axpy(dt / 3.0, mid).axpy(dt / 6.0, k4);
  }

  dealias_in_place(next.big);
  dealias_in_place(next.small);
  dealias_in_place(next.theta);
  State out = make_state(std::move(next), means_at(dt), state.time + dt);
  require_finite(out);
  return out;
}

double auto_dt(const State &state, const Params &p, const IntegratorConfig &cfg) {
  const SpectralVector u = state.velocity();
  auto [u1, u2] = to_physical_pair(u.x1, u.x2);
  const double u_max = lp_norm(PhysicalVector{std::move(u1), std::move(u2)}, std::numeric_limits<double>::infinity());
  const double advective = state.grid().spacing() / std::max(1.0, u_max);
  const double relaxation = 1.0 / (1.0 + 4.0 * p.kappa);
  return cfg.cfl_safety * std::min(advective, relaxation);
}

RunSummary run(const State &initial, const Params &p, const IntegratorConfig &cfg,
               const RunHooks &hooks) {
  p.validate();
  cfg.validate();
  const double span = cfg.t_end - initial.time;
  if (span < 0.0)
    throw ContractError("run: t_end lies before the initial time");

  RunSummary summary{initial, 0, 0.0};
  if (hooks.on_sample)
    hooks.on_sample(initial, 0);
  if (span == 0.0)
    return summary;

  const double dt_target = cfg.dt ? *cfg.dt : auto_dt(initial, p, cfg);
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(span / dt_target - 1e-9)));
  const double dt = span / static_cast<double>(n_steps);
  const int cadence = std::max(1, hooks.cadence);
  summary.dt = dt;

  State current = initial;
  for (long s = 1; s <= n_steps; ++s) {
    State next = step(current, dt, p, cfg.scheme);
    // Land exactly on t_end regardless of accumulated round-off.
    next.time = s == n_steps ? cfg.t_end : initial.time + static_cast<double>(s) * dt;
    if (hooks.on_step)
      hooks.on_step(current, next, dt, s);
    current = std::move(next);
    if (hooks.on_sample && (s % cadence == 0 || s == n_steps))
      hooks.on_sample(current, s);
  }
  summary.final_state = std::move(current);
  summary.steps = n_steps;
  return summary;
}

} // namespace mrbc
