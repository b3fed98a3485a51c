#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmdrift/drift.hpp"
#include "pmdrift/grid.hpp"
#include "pmdrift/reaction.hpp"
#include "pmdrift/stationary.hpp"

namespace pmdrift {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int dim = 1;
  std::array<int, 2> cells{64, 1};
  std::array<std::array<double, 2>, 2> extents{{{0.0, 1.0}, {0.0, 1.0}}};
  bool operator==(const GridSpec&) const = default;
};

/// Scalar catalog for initial data and sources: closed forms selected by
/// identifier, no expression parser.
struct ScalarSpec {
  std::string kind = "zero";  // zero | constant | bump | step
  double value = 0.0;         // constant
  std::array<double, 2> center{0.5, 0.5};
  std::array<double, 2> width{0.25, 0.25};
  double amplitude = 1.0;
  double cap = std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 1.0, pos = 0.5;  // step
  int axis = 0;
  bool operator==(const ScalarSpec&) const = default;
};

/// Drift catalog: zero, constant, per-axis linear a_k (x_k - c_k), rotational.
struct DriftSpec {
  std::string kind = "zero";
  std::array<double, 2> value{0.0, 0.0};   // constant
  std::array<double, 2> scale{1.0, 1.0};   // linear
  std::array<double, 2> center{0.0, 0.0};  // linear / rotational
  double strength = 1.0;                   // rotational
  bool operator==(const DriftSpec&) const = default;
};

struct ReactionConfig {
  std::string kind = "constant";  // constant | linear | quadratic
  double coef = 0.0;
  ScalarSpec source;  // constant kind
  bool operator==(const ReactionConfig&) const = default;
};

struct ToleranceOverrides {
  std::optional<double> newton_tol;
  std::optional<int> max_newton;
  std::optional<double> eps_floor;
  std::optional<double> delta_floor;
  std::optional<double> lin_tol;
  std::optional<double> check_tol;  // slack tolerance in verification rows
  bool operator==(const ToleranceOverrides&) const = default;
};

struct RunConfig {
  GridSpec grid;
  DriftSpec drift;
  std::optional<double> m;
  std::vector<double> m_list;
  std::optional<double> lambda;
  std::optional<double> horizon;
  std::optional<int> steps;
  ScalarSpec initial;
  std::optional<ScalarSpec> source;
  std::optional<ScalarSpec> source2;  // comparison-pair mode
  std::optional<ReactionConfig> reaction;
  double window_h = 0.0;
  ToleranceOverrides tol;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& cfg);  // canonical, sorted keys
std::string config_digest(const RunConfig& cfg);     // fnv1a-64 hex of canonical form

Grid make_grid(const GridSpec& spec);
VectorFieldSpec make_drift(const DriftSpec& spec, const Grid& grid);
Field make_scalar(const ScalarSpec& spec, const Grid& grid);
ReactionSpec make_reaction(const ReactionConfig& spec, const Grid& grid);
SolverConfig make_solver_config(const ToleranceOverrides& tol);
double check_tolerance(const ToleranceOverrides& tol);  // default 1e-8

}  // namespace pmdrift
