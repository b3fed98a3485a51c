#include "pmdrift/semigroup.hpp"

#include <cmath>

#include "pmdrift/norms.hpp"

namespace pmdrift {

StationarySolution PorousMediumOperator::resolve(double lambda, const Field& rhs,
                                                 WarmHint warm) const {
  StationaryProblem prob{&V_->grid(), V_, lambda, m_, rhs};
  return solve_stationary(prob, cfg_, warm.density);
}

StationarySolution HeleShawOperator::resolve(double lambda, const Field& rhs,
                                             WarmHint warm) const {
  StationaryProblem prob{&V_->grid(), V_, lambda, m_infinity, rhs};
  return solve_stationary(prob, cfg_, warm.pressure);
}

TimeSource TimeSource::zero(const Grid& grid) {
  Field z = grid.make_field();
  return {[z](double) { return z; }};
}

TimeSource TimeSource::constant(Field f) {
  return {[f = std::move(f)](double) { return f; }};
}

namespace {

EulerScheme run_scheme(const AccretiveOperator& op, const Field& u0,
                       const std::function<Field(double, const Field&)>& source_of_step,
                       double T, int n) {
  if (n < 1) throw InvalidArgument("step_scheme: need at least one step");
  const double eps = T / n;
  if (!(eps < op.lambda_max()))
    throw LambdaOutOfRange("step size exceeds the resolvent validity range");
  EulerScheme s;
  s.T = T;
  s.n = n;
  s.eps = eps;
  s.iterates.reserve(n + 1);
  s.pressures.reserve(n);
  s.sources.reserve(n);
  s.iterates.push_back(u0);
  for (int i = 1; i <= n; ++i) {
    // f_i is frozen at the state entering the step; midpoint time for plain
    // time sources.
    Field fi = source_of_step((i - 0.5) * eps, s.iterates.back());
    Field rhs = s.iterates.back();
    rhs.axpy(eps, fi);
    WarmHint warm{&s.iterates.back(),
                  s.pressures.empty() ? nullptr : &s.pressures.back()};
    try {
      StationarySolution sol = op.resolve(eps, rhs, warm);
      s.iterates.push_back(std::move(sol.v));
      s.pressures.push_back(std::move(sol.p));
      s.sources.push_back(std::move(fi));
    } catch (const NonConvergence& e) {
      throw NonConvergence(std::string(e.what()) + " (Euler step " + std::to_string(i) +
                               ")",
                           i);
    }
  }
  return s;
}

}  // namespace

EulerScheme step_scheme(const AccretiveOperator& op, const Field& u0, const TimeSource& f,
                        double T, int n) {
  return run_scheme(
      op, u0, [&f](double tmid, const Field&) { return f.eval(tmid); }, T, n);
}

EulerScheme step_scheme_reaction(const AccretiveOperator& op, const Field& u0,
                                 const StateSource& F, double T, int n) {
  const double eps = T / n;
  return run_scheme(
      op, u0,
      [&F, eps](double tmid, const Field& state) {
        return F(tmid - 0.5 * eps, state);  // frozen at the step's left endpoint
      },
      T, n);
}

const Field& MildSolution::at(double t) const {
  const int i = std::clamp(static_cast<int>(std::floor(t / scheme.eps)), 0, scheme.n);
  return scheme.iterates[i];
}

Field MildSolution::linear_at(double t) const {
  const double s = std::clamp(t / scheme.eps, 0.0, static_cast<double>(scheme.n));
  const int i = std::min(static_cast<int>(std::floor(s)), scheme.n - 1);
  const double w = s - i;
  Field out = scheme.iterates[i];
  out *= (1.0 - w);
  out.axpy(w, scheme.iterates[i + 1]);
  return out;
}

double scheme_distance_l1(const Grid& grid, const EulerScheme& a, const EulerScheme& b) {
  const EulerScheme& coarse = a.n <= b.n ? a : b;
  const EulerScheme& fine = a.n <= b.n ? b : a;
  if (fine.n % coarse.n != 0)
    throw InvalidArgument("scheme_distance_l1: step counts must divide");
  const int ratio = fine.n / coarse.n;
  double worst = 0.0;
  for (int i = 0; i <= coarse.n; ++i)
    worst = std::max(worst,
                     l1_distance(grid, coarse.iterates[i], fine.iterates[i * ratio]));
  return worst;
}

namespace {

MildSolution mild_driver(const AccretiveOperator& op,
                         const std::function<EulerScheme(int)>& run, double T,
                         double eps_target, bool richardson) {
  // Step doubling: at least four runs, finishing at or below eps_target.
  int n0 = std::max(2, static_cast<int>(std::ceil(T / (8.0 * eps_target))));
  MildSolution out;
  std::vector<EulerScheme> runs;
  for (int j = 0; j < 4; ++j) {
    const int n = n0 << j;
    runs.push_back(run(n));
    out.step_counts.push_back(n);
  }
  while (T / (n0 << (runs.size() - 1)) > eps_target) {
    const int n = n0 << runs.size();
    runs.push_back(run(n));
    out.step_counts.push_back(n);
  }
  const Grid& grid = op.grid();
  for (std::size_t j = 0; j + 1 < runs.size(); ++j)
    out.cauchy_trace.push_back(scheme_distance_l1(grid, runs[j], runs[j + 1]));
  const std::size_t g = out.cauchy_trace.size();
  out.cauchy_decreasing = g < 2 || out.cauchy_trace[g - 1] <= out.cauchy_trace[g - 2];
  if (richardson && runs.size() >= 2) {
    const EulerScheme& coarse = runs[runs.size() - 2];
    const EulerScheme& fine = runs.back();
    for (int i = 0; i <= coarse.n; ++i) {
      Field r = fine.iterates[2 * i];
      r *= 2.0;
      r.axpy(-1.0, coarse.iterates[i]);
      out.richardson.push_back(std::move(r));
    }
  }
  out.scheme = std::move(runs.back());
  return out;
}

}  // namespace

MildSolution mild_solve(const AccretiveOperator& op, const Field& u0, const TimeSource& f,
                        double T, double eps_target, bool richardson) {
  return mild_driver(
      op, [&](int n) { return step_scheme(op, u0, f, T, n); }, T, eps_target,
      richardson);
}

MildSolution mild_solve_reaction(const AccretiveOperator& op, const Field& u0,
                                 const StateSource& F, double T, double eps_target) {
  return mild_driver(
      op, [&](int n) { return step_scheme_reaction(op, u0, F, T, n); }, T, eps_target,
      false);
}

ContinuityTrace continuity_in_m(const Field& u0, const TimeSource& f, double T, int n,
                                const std::vector<double>& m_list,
                                const VectorFieldSpec& V, SolverConfig cfg) {
  ContinuityTrace tr;
  tr.m_list = m_list;
  const Grid& grid = V.grid();
  for (double m : m_list) {
    PorousMediumOperator op(m, V, cfg);
    try {
      tr.runs.push_back(step_scheme(op, u0, f, T, n));
    } catch (const NonConvergence& e) {
      throw NonConvergence("continuity_in_m at m=" + std::to_string(m) + ": " + e.what(),
                           e.step_index);
    }
  }
  HeleShawOperator hs(V, cfg);
  tr.limit_run = step_scheme(hs, u0, f, T, n);
  for (std::size_t k = 0; k + 1 < tr.runs.size(); ++k)
    tr.consecutive_gaps.push_back(scheme_distance_l1(grid, tr.runs[k], tr.runs[k + 1]));
  for (const auto& run : tr.runs)
    tr.gaps_to_limit.push_back(scheme_distance_l1(grid, run, tr.limit_run));
  const std::size_t g = tr.gaps_to_limit.size();
  tr.decreasing_to_limit = true;
  for (std::size_t k = g >= 3 ? g - 3 : 0; k + 1 < g; ++k)
    if (tr.gaps_to_limit[k + 1] > tr.gaps_to_limit[k]) tr.decreasing_to_limit = false;
  return tr;
}

}  // namespace pmdrift
