#pragma once

#include <string>
#include <vector>

#include "pmdrift/cutoff.hpp"
#include "pmdrift/semigroup.hpp"

namespace pmdrift {

class RegimePreconditionViolated : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CFLViolated : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shared data of an exponent sweep; every member runs on the same grid,
/// step count and data.
struct SharedEvolutionData {
  const Grid* grid = nullptr;
  const VectorFieldSpec* V = nullptr;
  Field u0;
  TimeSource f;
  double T = 1.0;
  int n = 1;
  SolverConfig cfg;
};

struct SweepMember {
  double m = 0.0;
  EulerScheme run;
  bool failed = false;
  std::string error;
};

struct MSweep {
  std::vector<double> m_list;
  std::vector<SweepMember> members;     // finite exponents, in m_list order
  SweepMember limit_member;             // sign-graph operator
  std::vector<double> consecutive_gaps; // sup_t L1 between m neighbours
  std::vector<double> gaps_to_limit;    // sup_t L1 against the limit run
};

/// Runs every exponent plus the sign-graph limit through the same stepping
/// engine. Per-member failures are recorded and the sweep continues.
MSweep run_msweep(const SharedEvolutionData& data, const std::vector<double>& m_list,
                  int threads = 1);

struct ComplementarityReport {
  double m = 0.0;
  double sup_excess = 0.0;       // max over cells/steps of (|u| - 1)^+
  double residual = 0.0;         // iint |p| (1 - |u|)^+ dx dt
  double graph_violation = 0.0;  // measure of {|p| > tol, u sign(p) < 1 - tol}
  double pressure_l1 = 0.0;      // iint |p| dx dt
};

ComplementarityReport complementarity_of_run(const Grid& grid, double m,
                                             const EulerScheme& run,
                                             double graph_tol = 1e-7);

/// Per-m reports, finite members first, then the limit member.
std::vector<ComplementarityReport> complementarity_diagnostics(const Grid& grid,
                                                               const MSweep& sweep,
                                                               double graph_tol = 1e-7);

struct TransportSolution {
  std::vector<Field> states;       // sampled at the scheme times 0..n
  double dt = 0.0;                 // internal CFL step
  double min_value = 0.0;
  double max_value = 0.0;
  double mass_balance_error = 0.0; // worst per-step conservation defect
};

/// Explicit upwind solve of du/dt + div(u V) = f under the stated CFL bound;
/// requires 0 <= f <= div V and 0 <= u0 <= 1 cellwise.
TransportSolution transport_reference(const Grid& grid, const VectorFieldSpec& V,
                                      const Field& u0, const Field& f, double T, int n,
                                      double cfl = 0.5);

struct BVWindowEntry {
  double m;
  const Field* v;
  const Field* p;
};

struct BVWindowReport {
  double window_h = 0.0;
  double lambda = 0.0;
  double lambda1 = 0.0;
  bool lambda1_finite = true;  // when false the stationary bound is vacuous
  std::vector<double> m_values;
  std::vector<double> tv_weighted;         // omega-weighted TV per entry
  std::vector<double> rhs_pressure_term;   // lambda * sum_i tv of p weighted by (Lap w)^+
  /// max over entries <= factor * first entry.
  bool bounded(double factor = 10.0) const;
};

/// Windowed total variation of each (v, p) pair against the interior cutoff
/// omega_h of the geometry module.
BVWindowReport bv_window(const Grid& grid, const VectorFieldSpec& V, double lambda,
                         double h, const std::vector<BVWindowEntry>& entries);

/// Cells with pressure above the congestion threshold, packed row-major,
/// 8 cells per byte, LSB first.
std::vector<unsigned char> congestion_mask(const Grid& grid, const Field& p,
                                           double threshold);

}  // namespace pmdrift
