#include "mrbc/dynamics.hpp"
#include "mrbc/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mrbc;
using namespace support;

namespace {

PhysicalField phys(const SpectralField &f) { return to_physical(f); }

double linf(const PhysicalField &f) {
  double m = 0.0;
  for (double v : f.values())
    m = std::max(m, std::abs(v));
  return m;
}

const Params kP{0.3, 0.2, 0.15, {}};

} // namespace

TEST_CASE("params contract") {
  CHECK_THROWS_AS((Params{0.1, 0.0, 1.0, {}}.validate()), ContractError);
  CHECK_THROWS_AS((Params{0.1, 1.0, -1.0, {}}.validate()), ContractError);
  CHECK_THROWS_AS((Params{-0.1, 1.0, 1.0, {}}.validate()), ContractError);
  CHECK_NOTHROW(kP.validate());
}

TEST_CASE("linear single-mode tendencies") {
  const Grid g = Grid::make(16);
  State s = State::zero(g);
  s.theta = to_spectral(sample(g, [](double x, double) { return std::cos(x); }));
  Tendency t = rhs(s, kP);
  CHECK(max_diff(phys(t.d_omega_big), sample(g, [](double x, double) { return -std::sin(x); })) < 1e-14);
  CHECK(max_abs(t.d_omega_small) == 0.0);
  CHECK(max_diff(phys(t.d_theta), sample(g, [&](double x, double) { return -kP.mu * std::cos(x); })) < 1e-15);

  s = State::zero(g);
  s.omega_small = to_spectral(sample(g, [](double, double y) { return std::cos(y); }));
  t = rhs(s, kP);
  CHECK(max_diff(phys(t.d_omega_big), sample(g, [&](double, double y) { return 2 * kP.kappa * std::cos(y); })) <
        1e-14);
  CHECK(max_diff(phys(t.d_omega_small),
                 sample(g, [&](double, double y) { return -(kP.gamma + 4 * kP.kappa) * std::cos(y); })) < 1e-15);
}

TEST_CASE("advection against a finite-difference oracle") {
  const int n = 64, fine = 4 * n;
  const Grid g = Grid::make(n);
  const double a = 0.5;
  auto omega = [&](double x, double y) { return 2 * std::sin(x) * std::sin(y) + a * std::cos(2 * x + y); };
  auto u1 = [&](double x, double y) { return std::sin(x) * std::cos(y) - a / 5 * std::sin(2 * x + y); };
  auto u2 = [&](double x, double y) { return -std::cos(x) * std::sin(y) + 2 * a / 5 * std::sin(2 * x + y); };

  State s = State::zero(g);
  s.omega_big = to_spectral(sample(g, omega));
  const PhysicalField d = phys(rhs(s, Params{0.0, 1.0, 1.0, {}}).d_omega_big);

  // Sixth-order central differences on the fine lattice, read back at coarse points.
  const double h = kTwoPi / fine;
  auto dd = [&](auto f, double x, double y, int axis) {
    const double c[3] = {3.0 / 4, -3.0 / 20, 1.0 / 60};
    double sum = 0.0;
    for (int m = 1; m <= 3; ++m) {
      const double dx = axis == 1 ? m * h : 0.0, dy = axis == 2 ? m * h : 0.0;
      sum += c[m - 1] * (f(x + dx, y + dy) - f(x - dx, y - dy));
    }
    return sum / h;
  };
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = i * 4 * h, y = j * 4 * h;
      const double adv = u1(x, y) * dd(omega, x, y, 1) + u2(x, y) * dd(omega, x, y, 2);
      err = std::max(err, std::abs(d.at(i, j) + adv));
      scale = std::max(scale, std::abs(adv));
    }
  CHECK(scale > 0.1);
  CHECK(err < 1e-6 * scale);
}

TEST_CASE("non-dealiased input is rejected") {
  const Grid g = Grid::make(16);
  State s = State::zero(g);
  s.theta.at(7, 0) = 0.5;
  s.theta.at(-7, 0) = 0.5;
  CHECK_THROWS_AS(rhs(s, kP), ContractError);
}

TEST_CASE("means and structural invariants") {
  const Grid g = Grid::make(32, 5.0);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const State s = random_state(g, 10 * seed, 9.0);
    const Tendency t = rhs(s, kP);
    const double omega_bar = s.omega_small.mean().real();
    const double tol = 1e-13 * std::max({max_abs(t.d_omega_big), max_abs(t.d_omega_small), max_abs(t.d_theta)});
    CHECK(std::abs(t.d_omega_small.mean() - Complex(-4 * kP.kappa * omega_bar)) < tol);
    CHECK(std::abs(t.d_theta.mean() - Complex(s.mean_u.second)) < tol);
    CHECK(std::abs(t.d_omega_big.mean()) < tol);
    CHECK(t.d_mean_u.first == 0.0);
    CHECK(t.d_mean_u.second == s.theta.mean().real());
    CHECK(max_modal_divergence(s.velocity()) < 1e-13);
    CHECK(max_outside_dealias(t.d_omega_big) == 0.0);

    // <theta e2, u> and <u . e2, theta> are the same integral
    const SpectralVector u = s.velocity();
    CHECK(inner(s.theta, u.x2) == inner(u.x2, s.theta));
  }
}

TEST_CASE("Z and its source") {
  const Grid g = Grid::make(32);
  State s = random_state(g, 50, 9.0);
  CHECK(max_diff(compute_Z(s, Params{0.0, 0.3, 1.0, {}}), s.omega_big) == 0.0);
  State no_omega = s;
  no_omega.omega_small = SpectralField(g);
  CHECK(max_diff(compute_Z(no_omega, kP), s.omega_big) == 0.0);

  State cancel = s;
  cancel.omega_small = (-kP.gamma / (2 * kP.kappa)) * s.omega_big;
  cancel.theta = SpectralField(g);
  CHECK(max_abs(compute_Z(cancel, kP)) < 1e-15 * max_abs(s.omega_big));

  // Hand derivation: Omega_t + (2k/g) omega_t gives
  //   -u.grad Z + d1 theta + (4k^2/g) Omega + (-8k^2/g) omega, Omega = Z - (2k/g) omega.
  const double k = kP.kappa, gm = kP.gamma;
  const double a = 4 * k * k / gm, b = -(8 * k * k / gm + 8 * k * k * k / (gm * gm));
  const ZCoefficients c = z_source_coefficients(kP);
  CHECK(c.z == doctest::Approx(a).epsilon(1e-15));
  CHECK(c.omega == doctest::Approx(b).epsilon(1e-15));

  const SpectralField residue = rhs_Z(cancel, kP);
  CHECK(max_diff(residue, b * cancel.omega_small) < 1e-13 * max_abs(residue));

  State heat = State::zero(g);
  heat.theta = to_spectral(sample(g, [](double x, double) { return std::cos(x); }));
  CHECK(max_diff(phys(rhs_Z(heat, kP)), sample(g, [](double x, double) { return -std::sin(x); })) < 1e-14);

  for (unsigned seed = 0; seed < 20; ++seed) {
    const State r = random_state(g, 100 + seed, 9.0);
    const SpectralField rz = rhs_Z(r, kP);
    SpectralField closed = derivative(r.theta, 1);
    closed.axpy(a, compute_Z(r, kP));
    closed.axpy(b, r.omega_small);
    REQUIRE(max_diff(rz, closed) < 1e-11 * max_abs(rz));

    const Tendency t = rhs(r, kP);
    SpectralField z = r.omega_big;
    z.axpy(2 * k / gm, r.omega_small);
    const SpectralVector u = r.velocity();
    const PhysicalField zx = phys(derivative(z, 1)), zy = phys(derivative(z, 2));
    const PhysicalField ux = phys(u.x1), uy = phys(u.x2);
    PhysicalField adv(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      adv.values()[i] = ux.values()[i] * zx.values()[i] + uy.values()[i] * zy.values()[i];
    SpectralField structural = t.d_omega_big;
    structural.axpy(2 * k / gm, t.d_omega_small);
    structural += dealias(to_spectral(adv));
    REQUIRE(max_diff(rz, structural) < 1e-11 * max_abs(rz));
  }
}

TEST_CASE("gradient of theta system") {
  const Grid g = Grid::make(32);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const State s = random_state(g, 200 + seed, 9.0);
    const SpectralVector lhs = rhs_grad_theta_perp(s, kP);
    const SpectralVector oracle = grad_perp(rhs(s, kP).d_theta);
    const double scale = std::max(max_abs(oracle.x1), max_abs(oracle.x2));
    REQUIRE(max_diff(lhs.x1, oracle.x1) < 1e-11 * scale);
    REQUIRE(max_diff(lhs.x2, oracle.x2) < 1e-11 * scale);
  }

  State still = random_state(g, 300, 9.0);
  still.omega_big = SpectralField(g);
  still.mean_u = {0.0, 0.0};
  const SpectralVector t = rhs_grad_theta_perp(still, kP);
  const SpectralVector gp = grad_perp(still.theta);
  CHECK(max_diff(t.x1, kP.mu * laplacian(gp.x1)) < 1e-13 * max_abs(t.x1));
  CHECK(max_diff(t.x2, kP.mu * laplacian(gp.x2)) < 1e-13 * max_abs(t.x2));

  State cold = random_state(g, 301, 9.0);
  cold.theta = SpectralField(g);
  const SpectralVector f = rhs_grad_theta_perp(cold, kP);
  const SpectralVector forcing = grad_perp(cold.velocity().x2);
  CHECK(max_diff(f.x1, forcing.x1) == 0.0);
  CHECK(max_diff(f.x2, forcing.x2) == 0.0);
}

TEST_CASE("mean mode flow") {
  const Params p{0.5, 1.0, 1.0, {}};
  MeanModes m = mean_mode_flow({0.2, 0.0}, 0.0, 0.0, p, 3.0);
  CHECK(m.mean_u.first == 0.2);
  CHECK(m.mean_u.second == 0.0);
  CHECK(m.theta_bar == 0.0);
  m = mean_mode_flow({0.0, 1.0}, 1.0, 1.0, p, 1.3);
  CHECK(m.mean_u.second == doctest::Approx(std::exp(1.3)).epsilon(1e-15));
  CHECK(m.theta_bar == doctest::Approx(std::exp(1.3)).epsilon(1e-15));
  CHECK(mean_mode_flow({0, 0}, 0, 1.0, p, 1.0).omega_bar == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(mean_mode_flow({0, 0}, 0, 0, p, -1.0), ContractError);
}

TEST_CASE("exchange and advection identities") {
  const Grid g = Grid::make(32, 3.0);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const State s = random_state(g, 400 + seed, 9.0);
    const SpectralVector u = s.velocity();
    auto [a, b] = to_physical_pair(u.x1, u.x2);
    const SpectralField adv = advect(PhysicalVector{std::move(a), std::move(b)}, s.theta);
    CHECK(std::abs(inner(adv, s.theta)) < 1e-11 * l2_norm(adv) * l2_norm(s.theta));
    const double lhs = inner(derivative(s.omega_small, 2), u.x1) - inner(derivative(s.omega_small, 1), u.x2);
    const double rhs_v = inner(s.omega_big, s.omega_small);
    CHECK(std::abs(lhs - rhs_v) < 1e-11 * l2_norm(s.omega_big) * l2_norm(s.omega_small));
    CHECK(linf(phys(s.omega_big)) > 0.0);
  }
}
