#include "pmdrift/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "pmdrift/assembly.hpp"
#include "pmdrift/norms.hpp"

namespace pmdrift {

namespace {

constexpr double kDerivativeCap = 1e290;

double sign_of(double r) { return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0); }

// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  if (!std::isfinite(hi)) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

double RegularizedProfile::value(double r) const {
  if (m == 1.0) return r;
  if (r == 0.0) return 0.0;
  const double a = std::abs(r);
  const double logsum = log_add(std::log(a), m * std::log(eps));
  return sign_of(r) * (std::exp(logsum / m) - eps);
}

double RegularizedProfile::derivative(double r) const {
  if (m == 1.0) return 1.0;
  const double a = std::abs(r);
  const double logsum =
      a == 0.0 ? m * std::log(eps) : log_add(std::log(a), m * std::log(eps));
  const double ld = -std::log(m) + logsum * (1.0 - m) / m;
  if (ld > std::log(kDerivativeCap)) return kDerivativeCap;
  return std::exp(ld);
}

namespace {

using fv::SpMat;

struct PointwiseProfile {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  double band = 0.0;  // graph mode: half-width of the linear segment
};

// Pressure as a function of density: the inverse of beta_eps,
// phi(v) = sign(v)*((|v| + eps)^m - eps^m). Bounded derivative on bounded
// density sets, degenerate (not stiff) at v = 0, which is what makes the
// density the workable Newton unknown at large m.
PointwiseProfile density_profile(double m, double eps) {
  if (m == 1.0)
    return {[](double r) { return r; }, [](double) { return 1.0; }};
  auto pow_cap = [](double logval) {
    if (logval > 667.0) return kDerivativeCap;
    return std::exp(logval);
  };
  auto value = [m, eps, pow_cap](double r) {
    const double a = std::abs(r);
    if (a == 0.0) return 0.0;
    const double big = pow_cap(m * std::log(a + eps));
    const double small = std::exp(m * std::log(eps));  // underflows harmlessly
    return sign_of(r) * (big - small);
  };
  auto deriv = [m, eps, pow_cap](double r) {
    return pow_cap(std::log(m) + (m - 1.0) * std::log(std::abs(r) + eps));
  };
  return {value, deriv};
}

PointwiseProfile graph_profile(double delta) {
  return {[delta](double r) { return std::clamp(r / delta, -1.0, 1.0); },
          [delta](double r) { return std::abs(r) <= delta ? 1.0 / delta : 0.0; },
          delta};
}

// The two Newton formulations share the shape R(x) = A1 x + A2 map(x) - f,
// J = A1 + A2 diag(map'):
//   density unknown (finite m):  A1 = I + lambda D,  A2 = lambda L, map = phi
//   pressure unknown (graph):    A1 = lambda L, A2 = I + lambda D,  map = clamp
struct NewtonWorkspace {
  const Grid* grid;
  SpMat A1;
  SpMat A2;
  Eigen::VectorXd fv;
  double vol;
  double tol_scaled;
  double lin_tol;
};

Eigen::VectorXd residual_vec(const NewtonWorkspace& w, const PointwiseProfile& prof,
                             const Eigen::VectorXd& x) {
  Eigen::VectorXd b(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) b[i] = prof.value(x[i]);
  return w.A1 * x + w.A2 * b - w.fv;
}

double residual_norm(const NewtonWorkspace& w, const Eigen::VectorXd& r) {
  return std::sqrt(w.vol * r.squaredNorm());
}

// Newton at a fixed regularization level; updates p in place and returns the
// reached residual norm. The smooth (finite-m) profile uses Armijo damping;
// the piecewise-linear graph profile takes full semismooth steps, which
// coincide with policy iteration on the active set.
double newton_level(const NewtonWorkspace& w, const PointwiseProfile& prof,
                    Eigen::VectorXd& p, int max_newton, bool full_steps,
                    int& iter_count) {
  Eigen::VectorXd r = residual_vec(w, prof, p);
  double rn = residual_norm(w, r);
  for (int it = 0; it < max_newton && rn > w.tol_scaled; ++it) {
    Eigen::VectorXd bp(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) bp[i] = prof.deriv(p[i]);
    SpMat J = w.A1 + SpMat(w.A2 * bp.asDiagonal());
    Eigen::VectorXd dp = fv::solve_sparse(J, Eigen::VectorXd(-r), *w.grid, w.lin_tol);
    ++iter_count;
    if (full_steps) {
      // A cell may change regime by at most one segment per iteration;
      // jumping straight across the linear band sets up 2-cycles.
      const double band = prof.band;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double pn = p[i] + dp[i];
        if (p[i] > band && pn < -band)
          p[i] = 0.0;
        else if (p[i] < -band && pn > band)
          p[i] = 0.0;
        else
          p[i] = pn;
      }
      r = residual_vec(w, prof, p);
      rn = residual_norm(w, r);
      if (dp.lpNorm<Eigen::Infinity>() == 0.0) break;  // fixed active set
      continue;
    }
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-12) {
      Eigen::VectorXd pc = p + t * dp;
      Eigen::VectorXd rc = residual_vec(w, prof, pc);
      const double rcn = residual_norm(w, rc);
      if (rcn <= (1.0 - 1e-4 * t) * rn) {
        p = std::move(pc);
        r = std::move(rc);
        rn = rcn;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // stalled line search
  }
  return rn;
}

StationarySolution solve_with_profile(const StationaryProblem& prob,
                                      const SolverConfig& cfg, bool graph_mode,
                                      const Field* warm_state) {
  const Grid& grid = *prob.grid;
  NewtonWorkspace w;
  w.grid = &grid;
  w.vol = grid.cell_volume();
  w.lin_tol = cfg.lin_tol;
  SpMat L = fv::laplacian_matrix(grid);
  SpMat D = fv::upwind_drift_matrix(*prob.V);
  SpMat I(grid.cell_count(), grid.cell_count());
  I.setIdentity();
  SpMat lambdaL = prob.lambda * L;
  SpMat M0 = I + prob.lambda * D;
  if (graph_mode) {
    w.A1 = std::move(lambdaL);
    w.A2 = std::move(M0);
  } else {
    w.A1 = std::move(M0);
    w.A2 = std::move(lambdaL);
  }
  w.fv.resize(grid.cell_count());
  for (std::size_t i = 0; i < grid.cell_count(); ++i) w.fv[i] = prob.f[i];
  w.tol_scaled = cfg.tol * (1.0 + std::sqrt(w.vol * w.fv.squaredNorm()));

  // Regularization schedule, geometric down to the floor.
  const double floor = graph_mode ? cfg.delta_floor : cfg.eps_floor;
  std::vector<double> schedule;
  if (!graph_mode && prob.m == 1.0) {
    schedule.push_back(floor);  // profile is exact for m = 1
  } else {
    double e = cfg.eps_start;
    schedule.push_back(e);
    while (e > floor) {
      e = std::max(floor, e * cfg.eps_shrink);
      schedule.push_back(e);
    }
  }

  // Unknown: density for finite m, pressure for the graph problem.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(grid.cell_count());
  if (warm_state && warm_state->size() == grid.cell_count())
    for (std::size_t i = 0; i < warm_state->size(); ++i) x[i] = (*warm_state)[i];

  StationarySolution sol;
  sol.stats.trace.reserve(schedule.size());
  PointwiseProfile prof;
  for (double eps : schedule) {
    prof = graph_mode ? graph_profile(eps) : density_profile(prob.m, eps);
    int iters = 0;
    const double rn = newton_level(w, prof, x, cfg.max_newton, graph_mode, iters);
    sol.stats.newton_iterations += iters;
    sol.stats.continuation_levels += 1;
    sol.stats.trace.push_back({eps, rn, iters});
    sol.stats.residual_norm = rn;
    sol.stats.final_eps = eps;
    if (rn > w.tol_scaled) {
      if (rn <= cfg.accept_factor * w.tol_scaled) {
        sol.stats.accepted_loose = true;
      } else {
        throw NonConvergence("stationary solve: Newton continuation exhausted at eps=" +
                             std::to_string(eps) + " residual=" + std::to_string(rn));
      }
    }
  }

  sol.p = Field(grid.cell_count());
  sol.v = Field(grid.cell_count());
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    if (graph_mode) {
      sol.p[i] = x[i];
      sol.v[i] = prof.value(x[i]);
    } else {
      sol.v[i] = x[i];
      sol.p[i] = prof.value(x[i]);
    }
  }
  return sol;
}

void validate_lambda(const StationaryProblem& prob) {
  if (!(prob.lambda > 0.0)) throw LambdaOutOfRange("lambda must be positive");
  const DriftThresholds thr = compute_thresholds(*prob.V);
  if (prob.lambda >= thr.lambda0)
    throw LambdaOutOfRange("lambda must be below lambda0 = 1/sup(divV)^-");
}

}  // namespace

StationarySolution solve_stationary(const StationaryProblem& prob, const SolverConfig& cfg,
                                    const Field* warm_p) {
  validate_lambda(prob);
  if (!(prob.m >= 1.0)) throw InvalidArgument("exponent m must be >= 1");
  const bool graph_mode = std::isinf(prob.m);
  return solve_with_profile(prob, cfg, graph_mode, warm_p);
}

Field resolvent(double lambda, double m, const VectorFieldSpec& V, const Field& f,
                const SolverConfig& cfg) {
  StationaryProblem prob{&V.grid(), &V, lambda, m, f};
  return solve_stationary(prob, cfg).v;
}

std::pair<Field, Field> resolvent_hs(double lambda, const VectorFieldSpec& V,
                                     const Field& f, const SolverConfig& cfg) {
  StationaryProblem prob{&V.grid(), &V, lambda, m_infinity, f};
  StationarySolution sol = solve_stationary(prob, cfg);
  return {std::move(sol.v), std::move(sol.p)};
}

Field scheme_residual(const StationaryProblem& prob, const Field& v, const Field& p) {
  SpMat L = fv::laplacian_matrix(*prob.grid);
  SpMat D = fv::upwind_drift_matrix(*prob.V);
  Field lp = fv::apply(L, p);
  Field dv = fv::apply(D, v);
  Field r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    r[i] = v[i] + prob.lambda * (lp[i] + dv[i]) - prob.f[i];
  return r;
}

bool StationaryEstimateReport::pass(double tol) const {
  for (const auto& row : lq_rows)
    if (std::isfinite(row.bound) && row.slack < -tol * (1.0 + std::abs(row.bound)))
      return false;
  return energy_slack >= -tol * (1.0 + std::abs(energy_rhs));
}

StationaryEstimateReport verify_stationary_estimates(const StationarySolution& sol,
                                                     const StationaryProblem& prob,
                                                     const std::vector<double>& q_list) {
  const Grid& grid = *prob.grid;
  const DriftThresholds thr = compute_thresholds(*prob.V);
  const double ratio = std::isinf(thr.lambda0) ? 0.0 : prob.lambda / thr.lambda0;
  StationaryEstimateReport rep;
  for (double q : q_list) {
    EstimateRow row;
    row.q = q;
    row.measured = lq_norm(grid, sol.v, q);
    const double shrink = std::isinf(q) ? 1.0 - ratio : 1.0 - (q - 1.0) * ratio;
    const double fq = lq_norm(grid, prob.f, q);
    row.bound = shrink > 0.0 ? fq / shrink : std::numeric_limits<double>::infinity();
    row.slack = row.bound - row.measured;
    rep.lq_rows.push_back(row);
  }
  const double mass_term = std::isinf(prob.m)
                               ? inner(grid, sol.v, sol.p)
                               : power_integral(grid, sol.v, prob.m + 1.0);
  rep.energy_lhs = (1.0 - ratio) * mass_term + prob.lambda * gradient_energy(grid, sol.p);
  rep.energy_rhs = inner(grid, prob.f, sol.p);
  rep.energy_slack = rep.energy_rhs - rep.energy_lhs;
  return rep;
}

}  // namespace pmdrift
