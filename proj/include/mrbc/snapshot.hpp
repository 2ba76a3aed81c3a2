#pragma once

// Snapshot files: one line of JSON
//   {"n":..,"length":..,"field_name":..,"time":..,"layout":"row-major","dtype":"f64-le"}
// terminated by '\n', followed by n*n little-endian float64 samples of the
// physical field in the layout documented in spectral.hpp.

#include "mrbc/spectral.hpp"

#include <filesystem>
#include <string>

namespace mrbc {

struct Snapshot {
  PhysicalField field;
  std::string field_name;
  double time = 0.0;
};

void write_snapshot(const std::filesystem::path &path, const PhysicalField &field,
                    const std::string &field_name, double time);

/// Throws ContractError on a malformed header or truncated payload.
Snapshot read_snapshot(const std::filesystem::path &path);

} // namespace mrbc
