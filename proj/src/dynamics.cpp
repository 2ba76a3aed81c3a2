#include "mrbc/dynamics.hpp"

#include "mrbc/errors.hpp"

#include <cmath>
#include <sstream>

namespace mrbc {

void Params::validate() const {
  if (!(kappa >= 0.0))
    throw ContractError("params: kappa must be >= 0");
  if (!(gamma > 0.0) || !(mu > 0.0))
    throw ContractError("params: require gamma > 0, mu > 0");
}

State State::zero(const Grid &grid) {
  return State{SpectralField(grid), SpectralField(grid), SpectralField(grid), {0.0, 0.0}, 0.0};
}

void require_dealiased(const State &s) {
  auto check = [](const SpectralField &f, const char *name) {
    double scale = 0.0;
    for (const auto &c : f.coeffs())
      scale = std::max(scale, std::abs(c));
    const double outside = max_outside_dealias(f);
    if (outside > 1e-14 * std::max(scale, 1.0)) {
      std::ostringstream msg;
      msg << "state field " << name << " is not dealiased (max coefficient outside radius "
          << outside << ")";
      throw ContractError(msg.str());
    }
  };
  check(s.omega_big, "Omega");
  check(s.omega_small, "omega");
  check(s.theta, "theta");
}

SpectralField advect(const PhysicalVector &u, const SpectralField &f) {
  const PhysicalVector df = gradient(f);
  PhysicalField prod(f.grid());
  auto out = prod.values();
  const auto u1 = u.x1.values(), u2 = u.x2.values();
  const auto f1 = df.x1.values(), f2 = df.x2.values();
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = u1[k] * f1[k] + u2[k] * f2[k];
  return dealias(to_spectral(prod));
}

namespace {

// Advection of two fields with one forward transform.
std::pair<SpectralField, SpectralField> advect_pair(const PhysicalVector &u,
                                                    const SpectralField &a,
                                                    const SpectralField &b) {
  const PhysicalVector da = gradient(a);
  const PhysicalVector db = gradient(b);
  PhysicalField pa(a.grid()), pb(b.grid());
  const auto u1 = u.x1.values(), u2 = u.x2.values();
  for (std::size_t k = 0; k < u1.size(); ++k) {
    pa.values()[k] = u1[k] * da.x1.values()[k] + u2[k] * da.x2.values()[k];
    pb.values()[k] = u1[k] * db.x1.values()[k] + u2[k] * db.x2.values()[k];
  }
  auto [sa, sb] = to_spectral_pair(pa, pb);
  dealias_in_place(sa);
  dealias_in_place(sb);
  return {std::move(sa), std::move(sb)};
}

Tendency assemble(const State &s, const Params &p, bool diffusion) {
  require_dealiased(s);
  const Grid &g = s.grid();
  const SpectralVector u = s.velocity();

  Tendency t{SpectralField(g), SpectralField(g), SpectralField(g), {0.0, 0.0}};

  if (p.terms.advection) {
    auto [u1, u2] = to_physical_pair(u.x1, u.x2);
    const PhysicalVector up{std::move(u1), std::move(u2)};
    auto [a_big, a_small] = advect_pair(up, s.omega_big, s.omega_small);
    t.d_omega_big -= a_big;
    t.d_omega_small -= a_small;
    t.d_theta -= advect(up, s.theta);
  }

  const auto big = s.omega_big.coeffs();
  const auto small = s.omega_small.coeffs();
  const auto th = s.theta.coeffs();
  auto d_big = t.d_omega_big.coeffs();
  auto d_small = t.d_omega_small.coeffs();
  auto d_th = t.d_theta.coeffs();
  const Complex i{0.0, 1.0};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double kk = g.k_squared(k);
    const double k1 = g.k_scale() * g.modes_at(k).first;
    if (p.terms.coupling) {
      d_big[k] += 2.0 * p.kappa * kk * small[k];
      d_small[k] += -4.0 * p.kappa * small[k] + 2.0 * p.kappa * big[k];
    }
    if (p.terms.buoyancy)
      d_big[k] += i * k1 * th[k];
    if (p.terms.convection)
      d_th[k] += u.x2.coeffs()[k];
    if (diffusion) {
      d_small[k] -= p.gamma * kk * small[k];
      d_th[k] -= p.mu * kk * th[k];
    }
  }
  // Odd derivative of the unpaired Nyquist column; zero inside the dealias ball anyway.
  dealias_in_place(t.d_omega_big);

  if (p.terms.buoyancy)
    t.d_mean_u = {0.0, s.theta.mean().real()};
  return t;
}

} // namespace

Tendency rhs(const State &state, const Params &p) { return assemble(state, p, true); }

Tendency rhs_explicit(const State &state, const Params &p) { return assemble(state, p, false); }

SpectralField compute_Z(const State &state, const Params &p) {
  if (!(p.gamma > 0.0))
    throw ContractError("compute_Z: gamma must be positive");
  SpectralField z = state.omega_big;
  z.axpy(2.0 * p.kappa / p.gamma, state.omega_small);
  return z;
}

SpectralField rhs_Z(const State &state, const Params &p) {
  const Tendency t = rhs(state, p);
  SpectralField src = t.d_omega_big;
  src.axpy(2.0 * p.kappa / p.gamma, t.d_omega_small);
  if (p.terms.advection) {
    const SpectralVector u = state.velocity();
    auto [u1, u2] = to_physical_pair(u.x1, u.x2);
    src += advect(PhysicalVector{std::move(u1), std::move(u2)}, compute_Z(state, p));
  }
  return src;
}

ZCoefficients z_source_coefficients(const Params &p) {
  const double k = p.kappa, g = p.gamma;
  return {4.0 * k * k / g, -(8.0 * k * k / g + 8.0 * k * k * k / (g * g))};
}

SpectralVector grad_perp(const SpectralField &f) {
  return {-1.0 * derivative(f, 2), derivative(f, 1)};
}

SpectralVector rhs_grad_theta_perp(const State &state, const Params &p) {
  require_dealiased(state);
  const Grid &g = state.grid();
  const SpectralVector u = state.velocity();
  const SpectralVector G = grad_perp(state.theta);

  SpectralVector out{p.mu * laplacian(G.x1), p.mu * laplacian(G.x2)};
  if (p.terms.advection) {
    auto [u1, u2] = to_physical_pair(u.x1, u.x2);
    const PhysicalVector up{std::move(u1), std::move(u2)};
    auto [g1, g2] = to_physical_pair(G.x1, G.x2);
    const PhysicalVector du1 = gradient(u.x1);
    const PhysicalVector du2 = gradient(u.x2);
    PhysicalField s1(g), s2(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double a = g1.values()[k], b = g2.values()[k];
      s1.values()[k] = a * du1.x1.values()[k] + b * du1.x2.values()[k];
      s2.values()[k] = a * du2.x1.values()[k] + b * du2.x2.values()[k];
    }
    auto [st1, st2] = to_spectral_pair(s1, s2);
    dealias_in_place(st1);
    dealias_in_place(st2);
    out.x1 += st1;
    out.x2 += st2;
    out.x1 -= advect(up, G.x1);
    out.x2 -= advect(up, G.x2);
  }
  if (p.terms.convection) {
    const SpectralVector forcing = grad_perp(u.x2);
    out.x1 += forcing.x1;
    out.x2 += forcing.x2;
  }
  return out;
}

MeanModes mean_mode_flow(std::pair<double, double> mean_u, double theta_bar, double omega_bar,
                         const Params &p, double dt) {
  if (!(dt >= 0.0))
    throw ContractError("mean_mode_flow: dt must be >= 0");
  // d(u2, theta_bar)/dt = [[0, b], [c, 0]] (u2, theta_bar) with b, c in {0, 1}.
  const double b = p.terms.buoyancy ? 1.0 : 0.0;
  const double c = p.terms.convection ? 1.0 : 0.0;
  const double u2 = mean_u.second;
  MeanModes out{};
  if (b * c > 0.0) {
    const double ch = std::cosh(dt), sh = std::sinh(dt);
    out.mean_u = {mean_u.first, ch * u2 + sh * theta_bar};
    out.theta_bar = sh * u2 + ch * theta_bar;
  } else {
    out.mean_u = {mean_u.first, u2 + b * dt * theta_bar};
    out.theta_bar = theta_bar + c * dt * u2;
  }
  const double decay = p.terms.coupling ? 4.0 * p.kappa : 0.0;
  out.omega_bar = std::exp(-decay * dt) * omega_bar;
  return out;
}

} // namespace mrbc
