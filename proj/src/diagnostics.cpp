#include "mrbc/diagnostics.hpp"

#include "mrbc/errors.hpp"
#include "mrbc/paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mrbc::diag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PhysicalVector physical_velocity(const State &s) {
  const SpectralVector u = s.velocity();
  auto [u1, u2] = to_physical_pair(u.x1, u.x2);
  return {std::move(u1), std::move(u2)};
}

// Zero-mean copy of a vorticity tendency; round-off can leave a 1e-18 mean.
SpectralField without_mean(SpectralField f) {
  f.coeffs()[0] = 0.0;
  return f;
}

double trapezoid_step(double a, double b, double dt) { return 0.5 * dt * (a + b); }

} // namespace

// --- energy ledger ------------------------------------------------------------

double velocity_sq(const State &s) {
  const Grid &g = s.grid();
  double sum = s.mean_u.first * s.mean_u.first + s.mean_u.second * s.mean_u.second;
  for (std::size_t k = 1; k < g.size(); ++k)
    sum += std::norm(s.omega_big.coeffs()[k]) / g.k_squared(k);
  return g.area() * sum;
}

EnergyTerms energy_terms(const State &s, const Params &p) {
  EnergyTerms t;
  const double omega_sq = inner(s.omega_small, s.omega_small);
  t.half_energy = 0.5 * (velocity_sq(s) + omega_sq + inner(s.theta, s.theta));
  t.grad_omega_sq = inner_grad(s.omega_small, s.omega_small);
  t.grad_theta_sq = inner_grad(s.theta, s.theta);
  t.dissipation_omega = p.gamma * t.grad_omega_sq;
  t.dissipation_theta = p.mu * t.grad_theta_sq;
  if (p.terms.coupling) {
    t.exchange = 4.0 * p.kappa * inner(s.omega_big, s.omega_small);
    t.relaxation = -4.0 * p.kappa * omega_sq;
  }
  const double weight = (p.terms.buoyancy ? 1.0 : 0.0) + (p.terms.convection ? 1.0 : 0.0);
  if (weight > 0.0)
    t.buoyancy = weight * inner(s.velocity().x2, s.theta);
  return t;
}

double source_rate(const State &s, const Tendency &t, const Params &p) {
  double rate = -2.0 * p.gamma * inner_grad(s.omega_small, t.d_omega_small) -
                2.0 * p.mu * inner_grad(s.theta, t.d_theta);
  if (p.terms.coupling) {
    rate += -8.0 * p.kappa * inner(s.omega_small, t.d_omega_small);
    rate += 4.0 * p.kappa *
            (inner(t.d_omega_big, s.omega_small) + inner(s.omega_big, t.d_omega_small));
  }
  const double weight = (p.terms.buoyancy ? 1.0 : 0.0) + (p.terms.convection ? 1.0 : 0.0);
  if (weight > 0.0) {
    const SpectralField u2 = s.velocity().x2;
    const SpectralField du2 =
        velocity_from_vorticity(without_mean(t.d_omega_big), t.d_mean_u).x2;
    rate += weight * (inner(du2, s.theta) + inner(u2, t.d_theta));
  }
  return rate;
}

LedgerRow energy_balance(const State &before, const State &after, double dt, const Params &p) {
  EnergyLedger ledger(p);
  ledger.record(before, after, dt);
  return ledger.rows().front();
}

EnergyLedger::Endpoint EnergyLedger::evaluate(const State &s) const {
  const EnergyTerms terms = energy_terms(s, params_);
  return {s.time, terms, source_rate(s, rhs(s, params_), params_)};
}

void EnergyLedger::record(const State &before, const State &after, double dt) {
  if (!last_ || last_->time != before.time) {
    last_ = evaluate(before);
    if (rows_.empty())
      initial_energy_ = last_->terms.half_energy;
  }
  const Endpoint a = *last_;
  const Endpoint b = evaluate(after);
  // Corrected trapezoid: exact for quartics, error O(dt^5).
  const double integral = trapezoid_step(a.terms.source(), b.terms.source(), dt) +
                          dt * dt / 12.0 * (a.rate - b.rate);
  LedgerRow row;
  row.time = after.time;
  row.terms = b.terms;
  row.source_integral = integral;
  row.defect = (b.terms.half_energy - a.terms.half_energy) - integral;
  cumulative_defect_ += row.defect;
  cumulative_source_ += integral;
  cumulative_dissipation_ +=
      trapezoid_step(a.terms.dissipation_omega + a.terms.dissipation_theta - a.terms.relaxation,
                     b.terms.dissipation_omega + b.terms.dissipation_theta - b.terms.relaxation,
                     dt);
  rows_.push_back(row);
  last_ = b;
}

// --- pointwise norms ----------------------------------------------------------

double lp(const SpectralField &f, double p) { return lp_norm(to_physical(f), p); }

double grad_lp(const SpectralField &f, double p) { return lp_norm(gradient(f), p); }

double grad_linf(const SpectralField &f) { return grad_lp(f, kInf); }

double blowup_monitor(const State &s) { return grad_linf(s.theta); }

bool blowup_flagged(double value, double ceiling) {
  return !std::isfinite(value) || value > ceiling;
}

double hessian_lp(const SpectralField &f, double p) {
  const SpectralField f11 = derivative(f, 1, 2);
  const SpectralField f22 = derivative(f, 2, 2);
  const SpectralField f12 = derivative(derivative(f, 1), 2);
  auto [a, b] = to_physical_pair(f11, f22);
  const PhysicalField c = to_physical(f12);
  PhysicalField mag(f.grid());
  for (std::size_t k = 0; k < mag.values().size(); ++k) {
    const double x = a.values()[k], y = b.values()[k], z = c.values()[k];
    mag.values()[k] = std::sqrt(x * x + y * y + 2.0 * z * z);
  }
  return lp_norm(mag, p);
}

double grad_velocity_linf(const State &s) {
  const SpectralVector u = s.velocity();
  const PhysicalVector d1 = gradient(u.x1);
  const PhysicalVector d2 = gradient(u.x2);
  double m = 0.0;
  for (std::size_t k = 0; k < d1.x1.values().size(); ++k) {
    const double a = d1.x1.values()[k], b = d1.x2.values()[k];
    const double c = d2.x1.values()[k], d = d2.x2.values()[k];
    m = std::max(m, std::sqrt(a * a + b * b + c * c + d * d));
  }
  return m;
}

double velocity_linf(const State &s) { return lp_norm(physical_velocity(s), kInf); }

// --- inequality ratios ----------------------------------------------------------

double bkm_ratio(const State &s, double sobolev_s, double p) {
  if (!(sobolev_s > 2.0) || !(p >= 2.0))
    throw ContractError("bkm_ratio: requires s > 2 and p >= 2");
  const double grad_u = grad_velocity_linf(s);
  const PhysicalField vort = to_physical(s.omega_big);
  const double denom = 1.0 + lp_norm(vort, p) +
                       lp_norm(vort, kInf) * std::log1p(paley::sobolev_norm(s.velocity(), sobolev_s));
  return grad_u / denom;
}

GnRatios gn_ratio(const SpectralField &f, double p) {
  if (!(p > 2.0) || std::isinf(p))
    throw ContractError("gn_ratio: requires finite p > 2");
  const PhysicalVector grad = gradient(f);
  const double grad_p = lp_norm(grad, p);
  if (!(grad_p > 0.0))
    throw ContractError("gn_ratio: field is constant, right-hand side vanishes");
  double scale = 0.0;
  for (const auto &c : f.coeffs())
    scale = std::max(scale, std::abs(c));
  if (std::abs(f.mean()) > 1e-12 * scale)
    throw ContractError("gn_ratio: field must have zero mean");
  const PhysicalField phys = to_physical(f);
  const double f_inf = lp_norm(phys, kInf);
  const double f_2 = lp_norm(phys, 2.0);
  const double f_p = lp_norm(phys, p);
  GnRatios r{};
  r.l2_form = f_inf / (std::pow(f_2, (p - 2.0) / (2.0 * p - 2.0)) *
                       std::pow(grad_p, p / (2.0 * p - 2.0)));
  r.lp_form = f_inf / (std::pow(f_p, 1.0 - 2.0 / p) * std::pow(grad_p, 2.0 / p));
  return r;
}

// --- Z budget -------------------------------------------------------------------

ZBudget z_budget(const std::vector<State> &trajectory, const Params &p, double p_norm) {
  ZBudget out;
  if (trajectory.empty())
    return out;
  const ZCoefficients c = z_source_coefficients(p);
  auto integrand = [&](const State &s) {
    return c.z * lp(compute_Z(s, p), p_norm) + std::abs(c.omega) * lp(s.omega_small, p_norm) +
           grad_lp(s.theta, p_norm);
  };
  const double z0 = lp(compute_Z(trajectory.front(), p), p_norm);
  double integral = 0.0;
  double prev_integrand = integrand(trajectory.front());
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const State &s = trajectory[i];
    if (i > 0) {
      const double cur = integrand(s);
      integral += trapezoid_step(prev_integrand, cur, s.time - trajectory[i - 1].time);
      prev_integrand = cur;
    }
    ZBudgetRow row{s.time, lp(compute_Z(s, p), p_norm), z0 + integral};
    const double ratio = row.rhs > 0.0 ? row.lhs / row.rhs : (row.lhs > 0.0 ? kInf : 0.0);
    out.max_ratio = std::max(out.max_ratio, ratio);
    out.rows.push_back(row);
  }
  return out;
}

// --- H^s series -------------------------------------------------------------------

HsSeries hs_series(const std::vector<State> &trajectory, double s) {
  HsSeries out;
  double integral = 0.0;
  double prev_g = 0.0;
  double e0 = 0.0;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const State &st = trajectory[i];
    HsRow row{st.time, paley::sobolev_norm(st.velocity(), s),
              paley::sobolev_norm(st.omega_small, s), paley::sobolev_norm(st.theta, s), 0.0};
    const double g = 1.0 + grad_velocity_linf(st) + grad_linf(st.omega_small) + grad_linf(st.theta);
    if (i > 0)
      integral += trapezoid_step(prev_g, g, st.time - trajectory[i - 1].time);
    prev_g = g;
    row.gronwall_integral = integral;
    const double e = row.u * row.u + row.omega * row.omega + row.theta * row.theta;
    out.all_finite = out.all_finite && std::isfinite(e) && std::isfinite(integral);
    if (i == 0)
      e0 = e;
    else if (e0 > 0.0 && integral > 0.0)
      out.growth_constant = std::max(out.growth_constant, (std::log(e) - std::log(e0)) / integral);
    out.rows.push_back(row);
  }
  return out;
}

// --- heat-kernel maximal regularity --------------------------------------------------

std::vector<SpectralField> heat_maximal_operator(const std::vector<SpectralField> &samples,
                                                 double sample_dt, double coeff) {
  if (samples.empty())
    return {};
  if (!(sample_dt > 0.0) || !(coeff > 0.0))
    throw ContractError("heat_maximal_operator: sample_dt and coeff must be positive");
  const Grid &g = samples.front().grid();
  // Per-mode weights for one interval of length h with x = coeff |k|^2 h:
  //   decay = e^-x, w1 = 1 - e^-x, w2 = (1 - e^-x (1 + x)) / x.
  std::vector<double> decay(g.size()), w1(g.size()), w2(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = coeff * g.k_squared(k) * sample_dt;
    decay[k] = std::exp(-x);
    w1[k] = -std::expm1(-x);
    w2[k] = x < 1e-4 ? x / 2.0 - x * x / 3.0 + x * x * x / 8.0 : (w1[k] - x * decay[k]) / x;
  }
  std::vector<SpectralField> out;
  out.reserve(samples.size());
  out.emplace_back(g);
  for (std::size_t m = 0; m + 1 < samples.size(); ++m) {
    SpectralField next(g);
    const auto prev = out.back().coeffs();
    const auto fa = samples[m].coeffs();
    const auto fb = samples[m + 1].coeffs();
    for (std::size_t k = 0; k < g.size(); ++k)
      next.coeffs()[k] = decay[k] * prev[k] - w1[k] * fb[k] + w2[k] * (fb[k] - fa[k]);
    out.push_back(std::move(next));
  }
  return out;
}

namespace {

double lp_time_lq_space(const std::vector<SpectralField> &series, double dt, double p, double q) {
  double sum = 0.0;
  for (std::size_t m = 0; m < series.size(); ++m) {
    const double w = (m == 0 || m + 1 == series.size()) ? 0.5 * dt : dt;
    sum += w * std::pow(lp(series[m], q), p);
  }
  return std::pow(sum, 1.0 / p);
}

} // namespace

double heat_maximal_regularity_check(const std::vector<SpectralField> &samples, double sample_dt,
                                     double coeff, double p, double q) {
  if (!(p > 1.0) || !(q > 1.0) || std::isinf(p) || std::isinf(q))
    throw ContractError("heat_maximal_regularity_check: p and q must lie in (1, inf)");
  if (samples.size() < 2)
    throw ContractError("heat_maximal_regularity_check: need at least two samples");
  const double denom = lp_time_lq_space(samples, sample_dt, p, q);
  if (!(denom > 0.0))
    throw ContractError("heat_maximal_regularity_check: input is identically zero");
  return lp_time_lq_space(heat_maximal_operator(samples, sample_dt, coeff), sample_dt, p, q) /
         denom;
}

// --- twin runs ----------------------------------------------------------------------

double state_distance(const State &a, const State &b) {
  State d{a.omega_big - b.omega_big, a.omega_small - b.omega_small, a.theta - b.theta,
          {a.mean_u.first - b.mean_u.first, a.mean_u.second - b.mean_u.second}, a.time};
  return velocity_sq(d) + inner(d.omega_small, d.omega_small) + inner(d.theta, d.theta);
}

TwinReport twin_run_stability(const State &ic1, const State &ic2, const Params &p,
                              const IntegratorConfig &cfg) {
  p.validate();
  cfg.validate();
  if (!(ic1.grid() == ic2.grid()))
    throw ContractError("twin_run_stability: initial conditions live on different grids");
  const double span = cfg.t_end - ic1.time;
  if (!(span > 0.0))
    throw ContractError("twin_run_stability: t_end must exceed the initial time");
  const double dt_target = cfg.dt ? *cfg.dt : auto_dt(ic1, p, cfg);
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(span / dt_target - 1e-9)));
  const double dt = span / static_cast<double>(n_steps);

  TwinReport report;
  auto rate_of = [](const State &s) {
    return 2.0 + 2.0 * grad_velocity_linf(s) + 2.0 * grad_linf(s.omega_small) +
           2.0 * grad_linf(s.theta);
  };
  State a = ic1, b = ic2;
  const double d0 = state_distance(a, b);
  report.identical = d0 == 0.0;
  report.rows.push_back({a.time, d0, rate_of(a)});
  for (long s = 1; s <= n_steps; ++s) {
    a = step(a, dt, p, cfg.scheme);
    b = step(b, dt, p, cfg.scheme);
    report.rows.push_back({a.time, state_distance(a, b), rate_of(a)});
  }
  for (const auto &row : report.rows)
    report.gronwall_rate = std::max(report.gronwall_rate, row.rate);
  report.worst_excess = -kInf;
  if (!report.identical) {
    for (const auto &row : report.rows)
      report.worst_excess = std::max(report.worst_excess,
                                     std::log(row.distance) - std::log(d0) -
                                         report.gronwall_rate * (row.time - ic1.time));
  } else {
    report.worst_excess = 0.0;
  }
  return report;
}

} // namespace mrbc::diag
