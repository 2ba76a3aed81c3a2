#pragma once

// Integrating-factor Runge-Kutta time stepping. The diffusion of omega and
// theta is absorbed into the exact factors exp(-gamma |k|^2 t) and
// exp(-mu |k|^2 t); every other term, including -4 kappa omega, is advanced
// by the explicit scheme. The spatial means of omega, theta and u follow
// their exact closed-form flow at every stage.

#include "mrbc/dynamics.hpp"

#include <functional>
#include <optional>

namespace mrbc {

enum class Scheme { IFRK2, IFRK4 };

int scheme_order(Scheme s);

struct IntegratorConfig {
  std::optional<double> dt; ///< nullopt selects auto_dt
  double t_end = 1.0;
  double cfl_safety = 0.4;
  Scheme scheme = Scheme::IFRK4;

  void validate() const;
};

/// One step of size dt. Throws IntegrationFailure on a non-finite result.
State step(const State &state, double dt, const Params &p, Scheme scheme);

/// cfl_safety * min(h / max(1, ||u||_inf), 1 / (1 + 4 kappa)).
double auto_dt(const State &state, const Params &p, const IntegratorConfig &cfg);

struct RunHooks {
  /// Samples are taken at step 0, every `cadence` steps, and at the final step.
  int cadence = 10;
  std::function<void(const State &, long step)> on_sample;
  /// Called after every step with the states on both sides.
  std::function<void(const State &before, const State &after, double dt, long step)> on_step;
};

struct RunSummary {
  State final_state;
  long steps = 0;
  double dt = 0.0;
};

/// Advances initial.time to cfg.t_end with a uniform step: the requested (or
/// automatic) dt is shrunk to divide the interval exactly.
RunSummary run(const State &initial, const Params &p, const IntegratorConfig &cfg,
               const RunHooks &hooks = {});

} // namespace mrbc
