#pragma once

#include "mrbc/dynamics.hpp"
#include "mrbc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace support {

using mrbc::Complex;
using mrbc::Grid;
using mrbc::SpectralField;

// Random real field with coefficients on integer modes |m| <= radius, zero
// mean unless with_mean.
inline SpectralField random_field(const Grid &g, unsigned seed, double radius, bool with_mean = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralField f(g);
  const int n = g.n();
  for (int a = -n / 2 + 1; a < n / 2; ++a)
    for (int b = -n / 2 + 1; b < n / 2; ++b) {
      if (a * a + b * b > radius * radius)
        continue;
      if (a < 0 || (a == 0 && b < 0))
        continue;
      if (a == 0 && b == 0) {
        if (with_mean)
          f.at(0, 0) = normal(rng);
        continue;
      }
      const Complex c(normal(rng), normal(rng));
      f.at(a, b) = c;
      f.at(-a, -b) = std::conj(c);
    }
  return f;
}

inline mrbc::State random_state(const Grid &g, unsigned seed, double radius) {
  mrbc::State s = mrbc::State::zero(g);
  s.omega_big = random_field(g, seed, radius);
  s.omega_small = random_field(g, seed + 1, radius, true);
  s.theta = random_field(g, seed + 2, radius, true);
  s.mean_u = {0.3, -0.1};
  return s;
}

inline double max_abs(const SpectralField &f) {
  double m = 0.0;
  for (const auto &c : f.coeffs())
    m = std::max(m, std::abs(c));
  return m;
}

inline double max_diff(const SpectralField &a, const SpectralField &b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.coeffs().size(); ++k)
    m = std::max(m, std::abs(a.coeffs()[k] - b.coeffs()[k]));
  return m;
}

inline double max_diff(const mrbc::PhysicalField &a, const mrbc::PhysicalField &b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

template <typename F> mrbc::PhysicalField sample(const Grid &g, F &&f) {
  mrbc::PhysicalField out(g);
  const double h = g.spacing();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      out.at(i, j) = f(i * h, j * h);
  return out;
}

} // namespace support
