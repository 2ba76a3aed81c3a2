#pragma once

// Tendencies of the 2D micropolar Rayleigh-Benard system without velocity
// dissipation, in vorticity form on the torus:
//
//   Omega_t = -u.grad Omega - 2 kappa Lap(omega) + d1 theta
//   omega_t = -u.grad omega + gamma Lap(omega) - 4 kappa omega + 2 kappa Omega
//   theta_t = -u.grad theta + mu Lap(theta) + u2
//   mean_u_t = (0, mean(theta))
//
// with u = mean_u + grad_perp Lap^-1 Omega. Every product is dealiased as
// soon as it is formed.

#include "mrbc/spectral.hpp"

#include <utility>

namespace mrbc {

/// Switches for individual terms; all on for the physical system.
struct Terms {
  bool advection = true;  ///< u.grad of Omega, omega and theta
  bool coupling = true;   ///< -2 kappa Lap(omega), 2 kappa Omega, -4 kappa omega
  bool buoyancy = true;   ///< d1 theta in the vorticity equation, theta in mean_u
  bool convection = true; ///< u2 forcing of theta
};

struct Params {
  double kappa = 0.0;
  double gamma = 1.0;
  double mu = 1.0;
  Terms terms{};

  /// Throws ContractError unless kappa >= 0, gamma > 0, mu > 0.
  void validate() const;
};

struct State {
  SpectralField omega_big;   ///< vorticity Omega, zero mean
  SpectralField omega_small; ///< microrotation omega, k = 0 mode is its mean
  SpectralField theta;       ///< temperature, k = 0 mode is its mean
  std::pair<double, double> mean_u{0.0, 0.0};
  double time = 0.0;

  static State zero(const Grid &grid);
  const Grid &grid() const { return omega_big.grid(); }
  SpectralVector velocity() const { return velocity_from_vorticity(omega_big, mean_u); }
};

struct Tendency {
  SpectralField d_omega_big;
  SpectralField d_omega_small;
  SpectralField d_theta;
  std::pair<double, double> d_mean_u{0.0, 0.0};
};

/// Throws ContractError if any field has content outside the dealias radius
/// or the vorticity has nonzero mean.
void require_dealiased(const State &state);

/// Full tendency, diffusion included.
Tendency rhs(const State &state, const Params &p);

/// Tendency without the gamma Lap(omega) and mu Lap(theta) terms; these are
/// the terms the integrating-factor schemes advance explicitly.
Tendency rhs_explicit(const State &state, const Params &p);

/// Z = Omega + (2 kappa / gamma) omega.
SpectralField compute_Z(const State &state, const Params &p);

/// Transport-free source of Z:
///   rhs.d_omega_big + (2 kappa / gamma) rhs.d_omega_small + dealias(u.grad Z).
SpectralField rhs_Z(const State &state, const Params &p);

/// Coefficients of the closed form Z source = a Z + b omega + d1 theta,
/// a = 4 kappa^2 / gamma and b = -(8 kappa^2 / gamma + 8 kappa^3 / gamma^2).
struct ZCoefficients {
  double z;
  double omega;
};
ZCoefficients z_source_coefficients(const Params &p);

/// Tendency of G = grad_perp theta:
///   -u.grad G + mu Lap G + (G.grad) u + grad_perp u2.
SpectralVector rhs_grad_theta_perp(const State &state, const Params &p);

/// grad_perp f = (-d2 f, d1 f)
SpectralVector grad_perp(const SpectralField &f);

/// Dealiased u.grad f for a velocity already on the grid.
SpectralField advect(const PhysicalVector &u, const SpectralField &f);

struct MeanModes {
  std::pair<double, double> mean_u;
  double theta_bar;
  double omega_bar;
};

/// Exact flow over dt of d(u1)/dt = 0, d(u2, theta_bar)/dt = (theta_bar, u2),
/// d(omega_bar)/dt = -4 kappa omega_bar.
MeanModes mean_mode_flow(std::pair<double, double> mean_u, double theta_bar, double omega_bar,
                         const Params &p, double dt);

} // namespace mrbc
