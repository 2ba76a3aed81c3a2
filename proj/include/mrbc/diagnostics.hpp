#pragma once

// Diagnostics for the a-priori quantities behind the well-posedness
// estimates: the L^2 energy ledger, the Z budget, the gradient blow-up
// monitor, ratio measurements for the interpolation and logarithmic
// inequalities, heat-kernel maximal regularity, and twin-run stability.
//
// All L^p norms are torus integrals by grid quadrature (see lp_norm); L^inf
// norms are grid maxima. H^s norms use the mean-normalised coefficients.

#include "mrbc/dynamics.hpp"
#include "mrbc/timestepper.hpp"

#include <optional>
#include <vector>

namespace mrbc::diag {

// --- energy ledger ------------------------------------------------------------

struct EnergyTerms {
  double half_energy = 0.0;   ///< (||u||^2 + ||omega||^2 + ||theta||^2) / 2
  double grad_omega_sq = 0.0; ///< ||grad omega||^2
  double grad_theta_sq = 0.0; ///< ||grad theta||^2
  double exchange = 0.0;      ///< 4 kappa <Omega, omega>
  double relaxation = 0.0;    ///< -4 kappa ||omega||^2
  double buoyancy = 0.0;      ///< 2 <u2, theta>
  double dissipation_omega = 0.0; ///< gamma ||grad omega||^2
  double dissipation_theta = 0.0; ///< mu ||grad theta||^2

  double coupling() const { return exchange + relaxation + buoyancy; }
  /// d/dt of half_energy along exact solutions.
  double source() const { return coupling() - dissipation_omega - dissipation_theta; }
};

double velocity_sq(const State &s);
EnergyTerms energy_terms(const State &s, const Params &p);
/// d/dt of EnergyTerms::source along the full tendency t.
double source_rate(const State &s, const Tendency &t, const Params &p);

struct LedgerRow {
  double time = 0.0;
  EnergyTerms terms;
  /// Change of half_energy over the step minus the corrected-trapezoid
  /// integral of the source. O(dt^(order+1)) for a scheme of that order.
  double defect = 0.0;
  /// Corrected-trapezoid integral of the source over the step.
  double source_integral = 0.0;
};

LedgerRow energy_balance(const State &before, const State &after, double dt, const Params &p);

/// Append-only per-step ledger; reuses the end-of-step tendency as the next
/// step's start.
class EnergyLedger {
public:
  explicit EnergyLedger(const Params &p) : params_(p) {}

  void record(const State &before, const State &after, double dt);

  const std::vector<LedgerRow> &rows() const { return rows_; }
  double initial_energy() const { return initial_energy_; }
  /// sum of per-step defects
  double cumulative_defect() const { return cumulative_defect_; }
  double cumulative_source() const { return cumulative_source_; }
  double cumulative_dissipation() const { return cumulative_dissipation_; }

private:
  struct Endpoint {
    double time;
    EnergyTerms terms;
    double rate;
  };
  Endpoint evaluate(const State &s) const;

  Params params_;
  std::optional<Endpoint> last_;
  std::vector<LedgerRow> rows_;
  double initial_energy_ = 0.0;
  double cumulative_defect_ = 0.0;
  double cumulative_source_ = 0.0;
  double cumulative_dissipation_ = 0.0;
};

// --- pointwise norms ----------------------------------------------------------

/// max_x |grad theta|
double blowup_monitor(const State &s);
bool blowup_flagged(double monitor_value, double ceiling);

/// max_x of the Frobenius norm of grad u
double grad_velocity_linf(const State &s);
double velocity_linf(const State &s);
/// max_x |grad f|
double grad_linf(const SpectralField &f);
/// || |D^2 f| ||_p with the Frobenius norm of the Hessian
double hessian_lp(const SpectralField &f, double p);

double lp(const SpectralField &f, double p);
double grad_lp(const SpectralField &f, double p);

// --- inequality ratios ----------------------------------------------------------

/// ||grad u||_inf / (1 + ||Omega||_p + ||Omega||_inf ln(1 + ||u||_{H^s})).
/// Requires s > 2 and p >= 2.
double bkm_ratio(const State &s, double sobolev_s, double p);

struct GnRatios {
  /// ||f||_inf / (||f||_2^((p-2)/(2p-2)) ||grad f||_p^(p/(2p-2)))
  double l2_form;
  /// ||f||_inf / (||f||_p^(1-2/p) ||grad f||_p^(2/p))
  double lp_form;
};

/// Requires p > 2 and f zero-mean and nonconstant.
GnRatios gn_ratio(const SpectralField &f, double p);

// --- Z budget -------------------------------------------------------------------

struct ZBudgetRow {
  double time;
  double lhs; ///< ||Z(t)||_p
  double rhs; ///< ||Z_0||_p + int_0^t (a ||Z||_p + |b| ||omega||_p + ||grad theta||_p)
};

struct ZBudget {
  std::vector<ZBudgetRow> rows;
  /// max over samples of lhs / rhs
  double max_ratio = 0.0;
};

/// The coefficients a, b come from z_source_coefficients; the time integral is
/// trapezoidal over the trajectory samples.
ZBudget z_budget(const std::vector<State> &trajectory, const Params &p, double p_norm);

// --- H^s series -------------------------------------------------------------------

struct HsRow {
  double time;
  double u, omega, theta;  ///< H^s norms
  double gronwall_integral; ///< int_0^t (1 + ||grad u||_inf + ||grad omega||_inf + ||grad theta||_inf)
};

struct HsSeries {
  std::vector<HsRow> rows;
  /// max_t [ln E(t) - ln E(0)] / gronwall_integral(t) with
  /// E = ||u||^2 + ||omega||^2 + ||theta||^2 in H^s; zero when E(0) = 0.
  double growth_constant = 0.0;
  bool all_finite = true;
};

HsSeries hs_series(const std::vector<State> &trajectory, double s);

// --- heat-kernel maximal regularity --------------------------------------------------

/// Tf(t_m) for Tf(t) = int_0^t c Lap exp(c (t - s) Lap) f(s) ds, evaluated
/// exactly for f piecewise linear in time between the uniform samples.
std::vector<SpectralField> heat_maximal_operator(const std::vector<SpectralField> &samples,
                                                 double sample_dt, double coeff);

/// ||Tf||_{L^p_t L^q_x} / ||f||_{L^p_t L^q_x}, time integrals by the
/// trapezoid rule. Requires p, q in (1, inf); throws on zero input.
double heat_maximal_regularity_check(const std::vector<SpectralField> &samples, double sample_dt,
                                     double coeff, double p, double q);

// --- twin runs ----------------------------------------------------------------------

struct TwinRow {
  double time;
  double distance; ///< ||du||^2 + ||domega||^2 + ||dtheta||^2
  double rate;     ///< 2 + 2 ||grad u1||_inf + 2 ||grad omega1||_inf + 2 ||grad theta1||_inf
};

struct TwinReport {
  std::vector<TwinRow> rows;
  /// sup of rate along the run
  double gronwall_rate = 0.0;
  /// max_t [ln D(t) - ln D(0) - rate t]; <= 0 when the Gronwall line holds
  double worst_excess = 0.0;
  bool identical = false;
};

double state_distance(const State &a, const State &b);

/// Evolves both initial conditions in lockstep with a common step size.
TwinReport twin_run_stability(const State &ic1, const State &ic2, const Params &p,
                              const IntegratorConfig &cfg);

} // namespace mrbc::diag
