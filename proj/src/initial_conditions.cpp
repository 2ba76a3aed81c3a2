#include "mrbc/initial_conditions.hpp"

#include "mrbc/errors.hpp"
#include "mrbc/paley.hpp"

#include <cmath>

namespace mrbc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename F> PhysicalField sample(const Grid &g, F &&f) {
  PhysicalField out(g);
  const double h = g.spacing();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      out.at(i, j) = f(i * h, j * h);
  return out;
}

State taylor_green(const IcSpec &spec, const Grid &g) {
  State s = State::zero(g);
  const double k = g.k_scale();
  s.omega_big = dealias(to_spectral(sample(g, [&](double x1, double x2) {
    return 2.0 * spec.amplitude * std::sin(k * x1) * std::sin(k * x2);
  })));
  s.omega_big.coeffs()[0] = 0.0;
  if (spec.theta_amplitude != 0.0)
    s.theta = dealias(to_spectral(sample(g, [&](double x1, double x2) {
      return spec.theta_amplitude * std::cos(k * x1) * std::cos(k * x2);
    })));
  return s;
}

State thermal_blob(const IcSpec &spec, const Grid &g) {
  State s = State::zero(g);
  const double k = g.k_scale();
  const double pi = kTwoPi / 2.0;
  s.theta = dealias(to_spectral(sample(g, [&](double x1, double x2) {
    return spec.amplitude *
           std::exp(spec.width * (std::cos(k * x1 - pi) + std::cos(k * x2 - pi) - 2.0));
  })));
  return s;
}

SpectralField band(const Grid &g, const CounterRng &rng, std::uint64_t stream, int j0, int j1) {
  const double lo = std::ldexp(1.0, j0);
  const double hi = std::ldexp(1.0, j1 + 1);
  SpectralField raw(g);
  auto c = raw.coeffs();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double r = std::sqrt(g.k_squared(idx));
    if (r < lo || r >= hi || !inside_dealias_ball(g, idx))
      continue;
    const auto [a, b] = rng.normal_pair(stream, idx);
    c[idx] = Complex(a, b);
  }
  // Hermitian symmetrisation: c(k) <- (c(k) + conj c(-k)) / 2
  SpectralField out(g);
  auto o = out.coeffs();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const auto [m1, m2] = g.modes_at(idx);
    o[idx] = 0.5 * (c[idx] + std::conj(raw.at(-m1, -m2)));
  }
  o[0] = 0.0;
  return out;
}

void normalise(SpectralField &f, double norm, double measured) {
  if (measured > 0.0)
    f *= norm / measured;
}

State random_band(const IcSpec &spec, const Grid &g) {
  if (!spec.seed)
    throw ConfigError("ic.seed: required for randomized initial condition '" + spec.name + "'");
  const CounterRng rng(*spec.seed);
  State s = State::zero(g);
  s.omega_big = band(g, rng, 0, spec.j0, spec.j1);
  s.omega_small = band(g, rng, 1, spec.j0, spec.j1);
  s.theta = band(g, rng, 2, spec.j0, spec.j1);
  normalise(s.omega_big, spec.norm, paley::sobolev_norm(s.velocity(), spec.s));
  normalise(s.omega_small, spec.norm, paley::sobolev_norm(s.omega_small, spec.s));
  normalise(s.theta, spec.norm, paley::sobolev_norm(s.theta, spec.s));
  return s;
}

} // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const {
  return splitmix64(splitmix64(seed_ ^ splitmix64(stream)) + counter);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const {
  return (static_cast<double>(bits(stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::normal_pair(std::uint64_t stream,
                                                  std::uint64_t counter) const {
  const double u1 = uniform(stream, 2 * counter);
  const double u2 = uniform(stream, 2 * counter + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

State make_ic(const IcSpec &spec, const Grid &grid) {
  if (spec.name == "zero")
    return State::zero(grid);
  if (spec.name == "taylor-green")
    return taylor_green(spec, grid);
  if (spec.name == "thermal-blob")
    return thermal_blob(spec, grid);
  if (spec.name == "random-band")
    return random_band(spec, grid);
  throw ConfigError("ic.name: unknown initial condition '" + spec.name + "'");
}

} // namespace mrbc
