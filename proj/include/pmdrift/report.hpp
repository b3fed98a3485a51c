#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pmdrift/grid.hpp"

namespace pmdrift {

/// One verification row: a named quantity against its bound. `anchor` names
/// the property being checked, or "plumbing" for infrastructure checks.
struct CheckRecord {
  std::string name;
  std::string anchor;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string subcommand;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string tier;
  std::vector<CheckRecord> checks;
  std::vector<std::string> files;
  std::map<std::string, double> wall_ms;
  std::string error;

  bool all_pass() const;
  void add(CheckRecord rec);
  /// Deterministic JSON (sorted keys, 17 significant digits).
  std::string to_json() const;
  /// One PASS/FAIL line per check.
  std::string summary() const;
  /// checks as CSV, the byte-stable payload used by determinism checks.
  std::string checks_csv() const;
};

std::string format_g17(double x);

void ensure_directory(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Row-major congestion bitmask with a 16-byte header: the 8-byte magic
/// "MESAMASK" then u32 nx, u32 ny (little endian).
void write_mask_file(const std::string& path, const Grid& grid,
                     const std::vector<unsigned char>& packed_bits);

}  // namespace pmdrift
