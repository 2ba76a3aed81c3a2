#pragma once

// Run configuration, read from JSON. Unknown keys are rejected.
//
//   {
//     "grid":        {"n": 128, "length": 6.283185307179586, "dealias_radius": 42.67},
//     "params":      {"kappa": 0.1, "gamma": 0.1, "mu": 0.1},
//     "integrator":  {"scheme": "IFRK4", "dt": "auto", "t_end": 1.0, "cfl_safety": 0.4},
//     "ic":          {"name": "random-band", "seed": 7, "j0": 1, "j1": 3, "s": 2.5, "norm": 1.0},
//     "diagnostics": {"cadence": 10, "checks": ["energy", "norms", "bkm", "gn", "hs"],
//                     "p_norms": [2, 4, "inf"], "s_values": [2.5], "blowup_ceiling": 1e12},
//     "output_dir":  "output"
//   }

#include "mrbc/dynamics.hpp"
#include "mrbc/spectral.hpp"
#include "mrbc/timestepper.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mrbc {

struct IcSpec {
  std::string name = "taylor-green";
  double amplitude = 1.0;       ///< taylor-green / thermal-blob amplitude
  double theta_amplitude = 0.0; ///< taylor-green thermal perturbation
  double width = 4.0;           ///< thermal-blob concentration
  std::optional<std::uint64_t> seed;
  int j0 = 1; ///< random-band lowest shell
  int j1 = 3; ///< random-band highest shell
  double s = 2.5;    ///< random-band Sobolev index of the normalisation
  double norm = 1.0; ///< random-band H^s norm of u, omega and theta

  bool randomized() const { return name == "random-band"; }
};

struct DiagnosticsConfig {
  int cadence = 10;
  std::vector<std::string> checks{"energy", "norms", "bkm", "gn", "hs"};
  std::vector<double> p_norms{2.0, 4.0, std::numeric_limits<double>::infinity()};
  std::vector<double> s_values{2.5};
  double blowup_ceiling = 1e12;

  bool enabled(const std::string &check) const;
};

struct RunConfig {
  Grid grid = Grid::make(128);
  Params params{0.1, 0.1, 0.1, {}};
  IntegratorConfig integrator{};
  IcSpec ic{};
  DiagnosticsConfig diagnostics{};
  std::filesystem::path output_dir = "output";
};

/// Parses without cross-field validation, so command-line overrides can be
/// applied first. Throws ConfigError naming the offending key path.
RunConfig parse_config(const std::string &json_text);

/// Cross-field checks: gamma > 0 and mu > 0, seed present for randomized
/// initial conditions, known names.
void validate(const RunConfig &cfg);

/// Reads, parses and validates. Throws ConfigError.
RunConfig load_config(const std::filesystem::path &path);

} // namespace mrbc
