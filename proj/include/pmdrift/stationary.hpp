#pragma once

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pmdrift/drift.hpp"
#include "pmdrift/grid.hpp"

namespace pmdrift {

class NonConvergence : public std::runtime_error {
public:
  explicit NonConvergence(const std::string& what, int step = -1)
      : std::runtime_error(what), step_index(step) {}
  int step_index;  // failing Euler step when raised during time stepping
};

class LambdaOutOfRange : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

constexpr double m_infinity = std::numeric_limits<double>::infinity();

/// Smooth strictly increasing regularization of r -> r^{1/m} with value 0 at 0:
/// beta_eps(r) = sign(r) * ((|r| + eps^m)^(1/m) - eps), evaluated in the log
/// domain so that large m cannot underflow eps^m.
struct RegularizedProfile {
  double m;
  double eps;
  double value(double r) const;
  double derivative(double r) const;  // capped to keep Jacobians finite
};

struct SolverConfig {
  double tol = 1e-10;           // residual tolerance, scaled by 1 + ||f||_2
  int max_newton = 50;          // Newton budget per continuation level
  double eps_start = 1e-1;      // first regularization level
  double eps_shrink = 0.25;     // geometric continuation factor
  double eps_floor = 1e-9;      // finite-m floor
  double delta_floor = 1e-8;    // graph-smoothing floor for m = infinity
  double lin_tol = 1e-12;       // iterative linear solve tolerance (2D)
  double accept_factor = 100.0; // accept budget exhaustion within factor*tol
};

struct ContinuationPoint {
  double eps;
  double residual;
  int newton_iterations;
};

struct SolveStats {
  int newton_iterations = 0;
  int continuation_levels = 0;
  double residual_norm = 0.0;
  double final_eps = 0.0;
  bool accepted_loose = false;
  std::vector<ContinuationPoint> trace;
};

struct StationaryProblem {
  const Grid* grid = nullptr;
  const VectorFieldSpec* V = nullptr;
  double lambda = 0.0;
  double m = 2.0;  // m_infinity selects the constrained (sign-graph) problem
  Field f;
};

struct StationarySolution {
  Field v;
  Field p;
  SolveStats stats;
};

/// Resolvent solve of v + lambda*(-Lap p + div(v V)) = f with p coupled to v
/// through the regularized power profile (finite m) or the clamped sign graph
/// (m = infinity). Requires lambda in (0, lambda0). `warm_p` seeds the
/// continuation (time stepping passes the previous pressure).
StationarySolution solve_stationary(const StationaryProblem& prob,
                                    const SolverConfig& cfg = {},
                                    const Field* warm_p = nullptr);

Field resolvent(double lambda, double m, const VectorFieldSpec& V, const Field& f,
                const SolverConfig& cfg = {});

std::pair<Field, Field> resolvent_hs(double lambda, const VectorFieldSpec& V,
                                     const Field& f, const SolverConfig& cfg = {});

/// Residual of the discrete scheme at (v, p); zero for an exact solution.
Field scheme_residual(const StationaryProblem& prob, const Field& v, const Field& p);

struct EstimateRow {
  double q;
  double measured;
  double bound;
  double slack;  // bound - measured
};

struct StationaryEstimateReport {
  std::vector<EstimateRow> lq_rows;
  double energy_lhs = 0.0;
  double energy_rhs = 0.0;
  double energy_slack = 0.0;  // rhs - lhs
  bool pass(double tol) const;
};

/// Per-q slack of the resolvent norm bounds plus the stationary energy
/// inequality, both sides evaluated by the scheme's quadrature.
StationaryEstimateReport verify_stationary_estimates(const StationarySolution& sol,
                                                     const StationaryProblem& prob,
                                                     const std::vector<double>& q_list);

}  // namespace pmdrift
