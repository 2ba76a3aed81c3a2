#pragma once

// Command-line front end and the invariant suites behind `check`.
//
//   mrbc run <config>                      simulate, write diagnostics.csv and snapshots
//   mrbc check <config>                    identity and exact-linear suites only
//   mrbc norms <snapshot> --s S --p P      Lebesgue, Sobolev and Besov norms of a snapshot
//   mrbc twin <config> --eps E             twin-run stability report
//
// Exit codes: 0 success, 1 other failure, 2 config error, 3 integration
// failure, 4 invariant violation.

#include "mrbc/config.hpp"
#include "mrbc/diagnostics.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace mrbc::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIntegration = 3;
inline constexpr int kExitInvariant = 4;

struct CheckResult {
  std::string name;
  double value;     ///< measured error
  double tolerance;
  bool pass() const { return value <= tolerance; }
};

/// Projection, cutoff, Littlewood-Paley, advection and coupling identities on
/// seeded random-band fields.
std::vector<CheckResult> identity_suite(const Grid &grid, double kappa, std::uint64_t seed);

/// Integrating-factor heat decay of single modes and the closed-form mean flow.
std::vector<CheckResult> exact_linear_suite(const Grid &grid, const Params &params);

/// Z source against its closed form on seeded random states.
std::vector<CheckResult> z_identity_suite(const Grid &grid, const Params &params,
                                          std::uint64_t seed, int states);

struct RunResult {
  RunSummary summary;
  double initial_energy = 0.0;
  double cumulative_defect = 0.0;
  std::filesystem::path csv_path;
};

/// Full run: diagnostics.csv plus initial_/final_ snapshots of Omega, omega
/// and theta in cfg.output_dir. Throws IntegrationFailure on non-finite
/// values or when max |grad theta| exceeds the blow-up ceiling.
RunResult run_simulation(const RunConfig &cfg, std::ostream &log, bool quiet);

/// The config's initial condition against the same state with
/// eps cos(x1) added to theta. Writes twin.csv to cfg.output_dir.
diag::TwinReport run_twin(const RunConfig &cfg, double eps, std::ostream &log, bool quiet);

int main_entry(int argc, char **argv);

} // namespace mrbc::app
