#pragma once

// Named initial conditions. All are dealiased; Omega has zero mean and the
// mean velocity starts at zero.
//
//   zero          everything zero
//   taylor-green  Omega = 2A sin x1 sin x2, theta = theta_amplitude cos x1 cos x2
//   thermal-blob  theta = A exp(width (cos(x1 - pi) + cos(x2 - pi) - 2))
//   random-band   Gaussian coefficients on 2^j0 <= |xi| < 2^(j1+1), each of
//                 u, omega, theta scaled to H^s norm `norm`

#include "mrbc/config.hpp"
#include "mrbc/dynamics.hpp"

#include <cstdint>

namespace mrbc {

/// Throws ConfigError on an unknown name or a missing seed.
State make_ic(const IcSpec &spec, const Grid &grid);

/// Counter-based generator: the value depends only on (seed, stream, counter).
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
  /// uniform on (0, 1)
  double uniform(std::uint64_t stream, std::uint64_t counter) const;
  /// standard normal pair by Box-Muller
  std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t counter) const;

private:
  std::uint64_t seed_;
};

} // namespace mrbc
