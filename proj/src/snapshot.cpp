#include "mrbc/snapshot.hpp"

#include "mrbc/errors.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace mrbc {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big)
    return __builtin_bswap64(v);
  return v;
}

} // namespace

void write_snapshot(const std::filesystem::path &path, const PhysicalField &field,
                    const std::string &field_name, double time) {
  const Grid &g = field.grid();
  nlohmann::json header = {{"n", g.n()},           {"length", g.length()},
                           {"field_name", field_name}, {"time", time},
                           {"layout", "row-major"},    {"dtype", "f64-le"}};
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ContractError("snapshot: cannot open " + path.string() + " for writing");
  out << header.dump() << '\n';
  for (double x : field.values()) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(x));
    out.write(reinterpret_cast<const char *>(&bits), sizeof bits);
  }
  if (!out)
    throw ContractError("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ContractError("snapshot: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw ContractError("snapshot: malformed header in " + path.string() + ": " + e.what());
  }
  if (header.value("layout", "") != "row-major" || header.value("dtype", "") != "f64-le")
    throw ContractError("snapshot: unsupported layout or dtype in " + path.string());
  const Grid grid = Grid::make(header.at("n").get<int>(), header.at("length").get<double>());
  std::vector<double> values(grid.size());
  for (auto &x : values) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char *>(&bits), sizeof bits))
      throw ContractError("snapshot: truncated payload in " + path.string());
    x = std::bit_cast<double>(to_little_endian(bits));
  }
  return {PhysicalField(grid, std::move(values)), header.at("field_name").get<std::string>(),
          header.at("time").get<double>()};
}

} // namespace mrbc
