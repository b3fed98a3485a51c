#include "pmdrift/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

namespace pmdrift {

using nlohmann::json;

bool RunReport::all_pass() const {
  if (!error.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void RunReport::add(CheckRecord rec) { checks.push_back(std::move(rec)); }

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string RunReport::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["config_digest"] = config_digest;
  j["seed"] = seed;
  if (!tier.empty()) j["tier"] = tier;
  j["pass"] = all_pass();
  if (!error.empty()) j["error"] = error;
  json rows = json::array();
  for (const auto& c : checks) {
    json r;
    r["name"] = c.name;
    r["anchor"] = c.anchor;
    r["measured"] = format_g17(c.measured);
    r["bound"] = format_g17(c.bound);
    r["slack"] = format_g17(c.slack);
    r["pass"] = c.pass;
    rows.push_back(r);
  }
  j["checks"] = rows;
  j["files"] = files;
  json t;
  for (const auto& [k, v] : wall_ms) t[k] = v;
  j["wall_ms"] = t;
  return j.dump(2);
}

std::string RunReport::summary() const {
  std::string out;
  for (const auto& c : checks) {
    out += c.pass ? "PASS  " : "FAIL  ";
    out += c.name;
    out += "  measured=" + format_g17(c.measured);
    out += "  bound=" + format_g17(c.bound);
    out += "  slack=" + format_g17(c.slack);
    out += "\n";
  }
  if (!error.empty()) out += "ERROR " + error + "\n";
  return out;
}

std::string RunReport::checks_csv() const {
  std::string out = "name,anchor,measured,bound,slack,pass\n";
  for (const auto& c : checks) {
    out += c.name + "," + c.anchor + "," + format_g17(c.measured) + "," +
           format_g17(c.bound) + "," + format_g17(c.slack) + "," +
           (c.pass ? "1" : "0") + "\n";
  }
  return out;
}

void ensure_directory(const std::string& path) {
  if (path.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + path + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

void write_mask_file(const std::string& path, const Grid& grid,
                     const std::vector<unsigned char>& packed_bits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const char magic[8] = {'M', 'E', 'S', 'A', 'M', 'A', 'S', 'K'};
  out.write(magic, 8);
  const std::uint32_t nx = static_cast<std::uint32_t>(grid.cells(0));
  const std::uint32_t ny = grid.dim() == 2 ? static_cast<std::uint32_t>(grid.cells(1)) : 1u;
  unsigned char dims[8];
  for (int k = 0; k < 4; ++k) dims[k] = static_cast<unsigned char>((nx >> (8 * k)) & 0xff);
  for (int k = 0; k < 4; ++k) dims[4 + k] = static_cast<unsigned char>((ny >> (8 * k)) & 0xff);
  out.write(reinterpret_cast<const char*>(dims), 8);
  out.write(reinterpret_cast<const char*>(packed_bits.data()),
            static_cast<std::streamsize>(packed_bits.size()));
}

}  // namespace pmdrift
