#pragma once

// Diagnostics time series. Fixed column order:
//   time, step, E_half, diss_omega, diss_theta, coupling, residual,
//   per p:  Omega_Lp{p} omega_Lp{p} Z_Lp{p} gradtheta_Lp{p} D2theta_Lp{p}
//   gradu_Linf, u_Linf,
//   per s:  u_Hs{s} omega_Hs{s} theta_Hs{s}
//   bkm, per finite p > 2: gn_p{p} gnlp_p{p}
// (p = inf is written "Linf"). Disabled checks and undefined values give
// empty cells. Numbers carry 17 significant digits.

#include "mrbc/config.hpp"
#include "mrbc/diagnostics.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mrbc {

std::string format_number(double x);
/// "2", "4", "2.5"
std::string format_index(double x);

class DiagnosticsCsv {
public:
  DiagnosticsCsv(std::ostream &out, const DiagnosticsConfig &cfg, const Params &params);

  const std::vector<std::string> &columns() const { return columns_; }

  /// Writes one row; `ledger` may be null when the energy check is off.
  void sample(const State &s, long step, const diag::EnergyLedger *ledger);

private:
  std::ostream &out_;
  DiagnosticsConfig cfg_;
  Params params_;
  std::vector<std::string> columns_;
};

} // namespace mrbc
