#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pmdrift/stationary.hpp"

namespace pmdrift {

/// Seeds for the nonlinear solve inside a resolvent call; each operator picks
/// the component it can use.
struct WarmHint {
  const Field* density = nullptr;
  const Field* pressure = nullptr;
};

/// Operator defined through its resolvent map; implementations must satisfy
/// the L1 contraction property (tested, not assumed).
class AccretiveOperator {
public:
  virtual ~AccretiveOperator() = default;
  /// Solves v + lambda * A v = rhs.
  virtual StationarySolution resolve(double lambda, const Field& rhs,
                                     WarmHint warm = {}) const = 0;
  /// Upper end of the valid lambda range (lambda0 of the drift).
  virtual double lambda_max() const = 0;
  virtual const Grid& grid() const = 0;
};

class PorousMediumOperator : public AccretiveOperator {
public:
  PorousMediumOperator(double m, const VectorFieldSpec& V, SolverConfig cfg = {})
      : m_(m), V_(&V), cfg_(cfg) {}
  StationarySolution resolve(double lambda, const Field& rhs,
                             WarmHint warm = {}) const override;
  double lambda_max() const override { return compute_thresholds(*V_).lambda0; }
  const Grid& grid() const override { return V_->grid(); }
  double exponent() const { return m_; }

private:
  double m_;
  const VectorFieldSpec* V_;
  SolverConfig cfg_;
};

/// The constrained (sign-graph) operator; the m = infinity member of the
/// family, run through the same stepping engine.
class HeleShawOperator : public AccretiveOperator {
public:
  explicit HeleShawOperator(const VectorFieldSpec& V, SolverConfig cfg = {})
      : V_(&V), cfg_(cfg) {}
  StationarySolution resolve(double lambda, const Field& rhs,
                             WarmHint warm = {}) const override;
  double lambda_max() const override { return compute_thresholds(*V_).lambda0; }
  const Grid& grid() const override { return V_->grid(); }

private:
  const VectorFieldSpec* V_;
  SolverConfig cfg_;
};

/// Time-dependent source; step averages use midpoint sampling.
struct TimeSource {
  std::function<Field(double)> eval;
  static TimeSource zero(const Grid& grid);
  static TimeSource constant(Field f);
};

/// Record of one Euler-implicit run: u_i = J_eps(u_{i-1} + eps f_i).
struct EulerScheme {
  double T = 0.0;
  int n = 0;
  double eps = 0.0;
  std::vector<Field> iterates;   // u_0 .. u_n
  std::vector<Field> pressures;  // p_i of step i, index i-1
  std::vector<Field> sources;    // f_i of step i, index i-1
  double time(int i) const { return i * eps; }
  const Field& at_step(int i) const { return iterates[i]; }
};

EulerScheme step_scheme(const AccretiveOperator& op, const Field& u0,
                        const TimeSource& f, double T, int n);

/// Reaction-style source evaluated on the running state.
using StateSource = std::function<Field(double, const Field&)>;

EulerScheme step_scheme_reaction(const AccretiveOperator& op, const Field& u0,
                                 const StateSource& F, double T, int n);

struct MildSolution {
  EulerScheme scheme;                // finest run
  std::vector<int> step_counts;      // n per refinement
  std::vector<double> cauchy_trace;  // sup_t L1 gap between consecutive runs
  bool cauchy_decreasing = true;     // over the final two halvings
  std::vector<Field> richardson;     // optional extrapolation at coarse times

  /// Piecewise-constant trajectory value.
  const Field& at(double t) const;
  /// Piecewise-linear interpolant; agrees with `at` on grid times.
  Field linear_at(double t) const;
};

/// Euler-implicit runs with step doubling until T/n <= eps_target; the
/// returned trace must decrease over the last two halvings, otherwise the
/// solution is flagged (still returned).
MildSolution mild_solve(const AccretiveOperator& op, const Field& u0, const TimeSource& f,
                        double T, double eps_target, bool richardson = false);

MildSolution mild_solve_reaction(const AccretiveOperator& op, const Field& u0,
                                 const StateSource& F, double T, double eps_target);

struct ContinuityTrace {
  std::vector<double> m_list;
  std::vector<EulerScheme> runs;          // one per m
  EulerScheme limit_run;                  // sign-graph operator
  std::vector<double> consecutive_gaps;   // sup_t L1 between neighbours in m
  std::vector<double> gaps_to_limit;      // sup_t L1 against the limit run
  bool decreasing_to_limit = true;        // over the final three entries
};

/// Fixed-eps trajectories for each exponent in m_list plus the sign-graph
/// operator, with sup-in-time L1 distances.
ContinuityTrace continuity_in_m(const Field& u0, const TimeSource& f, double T, int n,
                                const std::vector<double>& m_list,
                                const VectorFieldSpec& V, SolverConfig cfg = {});

/// sup over shared step times of the L1 distance between two runs whose step
/// counts divide one another.
double scheme_distance_l1(const Grid& grid, const EulerScheme& a, const EulerScheme& b);

}  // namespace pmdrift
