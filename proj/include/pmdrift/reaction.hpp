#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "pmdrift/drift.hpp"
#include "pmdrift/grid.hpp"
#include "pmdrift/semigroup.hpp"

namespace pmdrift {

class HorizonTooLong : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BarrierUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ReactionKind { ConstantInR, LinearInR, Quadratic, Custom };

/// Reaction g(t, x, r) with a continuous one-sided slope envelope theta:
/// difference quotients of g in r never exceed max theta on the interval.
struct ReactionSpec {
  ReactionKind kind = ReactionKind::Custom;
  std::function<double(double, std::array<double, 2>, double)> g;
  std::function<double(double)> theta;
  double linear_coef = 0.0;                      // LinearInR
  std::function<double(double)> source_sup;      // ConstantInR: t -> sup_x |f|

  /// g(t, x, r) = f(x), time-constant.
  static ReactionSpec constant_source(const Grid& grid, Field f);
  /// g(t, x, r) = c * r.
  static ReactionSpec linear(double c);
  /// g(t, x, r) = r^2.
  static ReactionSpec quadratic();
  static ReactionSpec custom(std::function<double(double, std::array<double, 2>, double)> g,
                             std::function<double(double)> theta);

  Field evaluate(const Grid& grid, double t, const Field& u) const;
};

/// Spatially constant sub/supersolution pair sampled on the step grid.
struct BarrierSample {
  double t;
  double lower, upper;
  double dlower, dupper;  // time derivatives at the sample
};

enum class BarrierProvenance { ClosedForm, OdeIntegrated, UserSupplied };

struct BarrierPair {
  std::vector<BarrierSample> samples;  // i = 0..n aligned with step times
  BarrierProvenance provenance = BarrierProvenance::ClosedForm;
  double sup_abs() const;  // M = max(||lower||_inf, ||upper||_inf)
};

/// Closed-form barriers for the built-in kinds, ODE-integrated otherwise.
/// The quadratic kind requires div V >= 0 and T < 1/||u0||_inf.
BarrierPair build_barriers(const ReactionSpec& spec, const Grid& grid, const Field& u0,
                           const VectorFieldSpec& V, double T, int n);

/// Worst (most negative) sub/supersolution residual over samples and cells:
/// upper: d/dt w2 + w2 div V - g(t, x, w2) and the mirrored lower inequality.
double barrier_residual_margin(const ReactionSpec& spec, const Grid& grid,
                               const VectorFieldSpec& V, const BarrierPair& barriers);

/// Total-on-R reaction map F(t, z) = g(t, x, clamp(z, -M, M)).
class ClampedReactionMap {
public:
  ClampedReactionMap(const ReactionSpec& spec, double clamp_bound)
      : spec_(&spec), M_(clamp_bound) {}
  double clamp_bound() const { return M_; }
  Field operator()(const Grid& grid, double t, const Field& z) const;
  StateSource as_state_source(const Grid& grid) const;

private:
  const ReactionSpec* spec_;
  double M_;
};

ClampedReactionMap clamp_map(const ReactionSpec& spec, const BarrierPair& barriers);

struct ConfinementReport {
  double worst_below = 0.0;  // max over time/cells of (lower - u)^+
  double worst_above = 0.0;  // max over time/cells of (u - upper)^+
  bool pass(double tol) const { return worst_below <= tol && worst_above <= tol; }
};

/// Checks lower(t_i) - tol <= u(t_i, x) <= upper(t_i) + tol on every step.
ConfinementReport verify_confinement(const EulerScheme& traj, const BarrierPair& barriers);

}  // namespace pmdrift
