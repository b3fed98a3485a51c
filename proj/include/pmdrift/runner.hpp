#pragma once

#include "pmdrift/config.hpp"
#include "pmdrift/report.hpp"

namespace pmdrift {

struct RunContext {
  std::string out_dir;  // empty: no files written
  int threads = 1;
};

/// Resolvent solve with the stationary estimate rows; writes solution.csv
/// and run.json.
RunReport run_stationary(const RunConfig& cfg, const RunContext& ctx);

/// Euler-implicit evolution (plain source, comparison pair, or reaction
/// mode); writes trajectory.csv, norms.csv and run.json.
RunReport run_evolve(const RunConfig& cfg, const RunContext& ctx);

/// Exponent sweep with complementarity, transport and windowed-TV
/// diagnostics; writes sweep.csv, masks/ and run.json.
RunReport run_sweep_m(const RunConfig& cfg, const RunContext& ctx);

/// Exit-code mapping shared by the C API and the CLI:
/// 0 pass, 1 criterion failure, 2 input error, 3 solver nonconvergence.
int status_of(const RunReport& report);

}  // namespace pmdrift
