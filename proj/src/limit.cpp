#include "pmdrift/limit.hpp"

#include <cmath>
#include <future>

#include "pmdrift/norms.hpp"

namespace pmdrift {

namespace {

SweepMember run_member(const SharedEvolutionData& data, double m) {
  SweepMember member;
  member.m = m;
  try {
    if (std::isinf(m)) {
      HeleShawOperator op(*data.V, data.cfg);
      member.run = step_scheme(op, data.u0, data.f, data.T, data.n);
    } else {
      PorousMediumOperator op(m, *data.V, data.cfg);
      member.run = step_scheme(op, data.u0, data.f, data.T, data.n);
    }
  } catch (const std::exception& e) {
    member.failed = true;
    member.error = e.what();
  }
  return member;
}

}  // namespace

MSweep run_msweep(const SharedEvolutionData& data, const std::vector<double>& m_list,
                  int threads) {
  MSweep sweep;
  sweep.m_list = m_list;
  sweep.members.resize(m_list.size());
  if (threads > 1) {
    std::vector<std::future<SweepMember>> futures;
    futures.reserve(m_list.size());
    for (double m : m_list)
      futures.push_back(std::async(std::launch::async, run_member, std::cref(data), m));
    for (std::size_t k = 0; k < futures.size(); ++k) sweep.members[k] = futures[k].get();
  } else {
    for (std::size_t k = 0; k < m_list.size(); ++k)
      sweep.members[k] = run_member(data, m_list[k]);
  }
  sweep.limit_member = run_member(data, m_infinity);

  const Grid& grid = *data.grid;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k + 1 < sweep.members.size(); ++k) {
    const auto& a = sweep.members[k];
    const auto& b = sweep.members[k + 1];
    sweep.consecutive_gaps.push_back(
        a.failed || b.failed ? nan : scheme_distance_l1(grid, a.run, b.run));
  }
  for (const auto& mem : sweep.members)
    sweep.gaps_to_limit.push_back(mem.failed || sweep.limit_member.failed
                                      ? nan
                                      : scheme_distance_l1(grid, mem.run,
                                                           sweep.limit_member.run));
  return sweep;
}

ComplementarityReport complementarity_of_run(const Grid& grid, double m,
                                             const EulerScheme& run, double graph_tol) {
  ComplementarityReport rep;
  rep.m = m;
  const double vol = grid.cell_volume();
  for (int i = 1; i <= run.n; ++i) {
    const Field& u = run.iterates[i];
    const Field& p = run.pressures[i - 1];
    double res = 0.0, viol = 0.0, pl1 = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
      rep.sup_excess = std::max(rep.sup_excess, std::abs(u[c]) - 1.0);
      const double slack = std::max(1.0 - std::abs(u[c]), 0.0);
      res += std::abs(p[c]) * slack;
      pl1 += std::abs(p[c]);
      if (std::abs(p[c]) > graph_tol && u[c] * (p[c] > 0 ? 1.0 : -1.0) < 1.0 - graph_tol)
        viol += 1.0;
    }
    rep.residual += run.eps * vol * res;
    rep.pressure_l1 += run.eps * vol * pl1;
    rep.graph_violation += run.eps * vol * viol;
  }
  rep.sup_excess = std::max(rep.sup_excess, 0.0);
  return rep;
}

std::vector<ComplementarityReport> complementarity_diagnostics(const Grid& grid,
                                                               const MSweep& sweep,
                                                               double graph_tol) {
  std::vector<ComplementarityReport> out;
  for (const auto& mem : sweep.members)
    if (!mem.failed) out.push_back(complementarity_of_run(grid, mem.m, mem.run, graph_tol));
  if (!sweep.limit_member.failed)
    out.push_back(
        complementarity_of_run(grid, m_infinity, sweep.limit_member.run, graph_tol));
  return out;
}

TransportSolution transport_reference(const Grid& grid, const VectorFieldSpec& V,
                                      const Field& u0, const Field& f, double T, int n,
                                      double cfl) {
  if (!(cfl > 0.0) || cfl > 0.5)
    throw CFLViolated("transport reference requires 0 < cfl <= 0.5");
  const double tol = 1e-12;
  const Field& div = V.divergence();
  for (std::size_t c = 0; c < f.size(); ++c)
    if (f[c] < -tol || f[c] > div[c] + tol)
      throw RegimePreconditionViolated("need 0 <= f <= div V cellwise");
  for (double x : u0.values())
    if (x < -tol || x > 1.0 + tol)
      throw RegimePreconditionViolated("need 0 <= u0 <= 1 cellwise");

  const double eps = T / n;
  double rate = 0.0;
  {
    double mx = 0.0;
    for (double v : V.faces_x()) mx = std::max(mx, std::abs(v));
    rate += mx / grid.spacing(0);
    if (grid.dim() == 2) {
      double my = 0.0;
      for (double v : V.faces_y()) my = std::max(my, std::abs(v));
      rate += my / grid.spacing(1);
    }
  }
  const int sub = rate > 0.0 ? std::max(1, static_cast<int>(std::ceil(eps * rate / cfl)))
                             : 1;
  const double dt = eps / sub;

  TransportSolution sol;
  sol.dt = dt;
  sol.states.reserve(n + 1);
  sol.states.push_back(u0);
  sol.min_value = u0.min();
  sol.max_value = u0.max();

  const int nx = grid.cells(0);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
  const double vol = grid.cell_volume();
  Field u = u0;
  Field unew = grid.make_field();
  for (int step = 0; step < n; ++step) {
    for (int k = 0; k < sub; ++k) {
      double boundary_outflux = 0.0;
      auto upwind = [&](double vf, double ul, double ur) { return vf > 0.0 ? vf * ul : vf * ur; };
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const std::size_t c = grid.index(i, j);
          double divflux = 0.0;
          {
            const double hl = upwind(V.face_x(i, j), i > 0 ? u[grid.index(i - 1, j)] : 0.0,
                                     u[c]);
            const double hr = upwind(V.face_x(i + 1, j), u[c],
                                     i + 1 < nx ? u[grid.index(i + 1, j)] : 0.0);
            divflux += (hr - hl) / grid.spacing(0);
            if (i == 0) boundary_outflux -= hl * vol / grid.spacing(0);
            if (i + 1 == nx) boundary_outflux += hr * vol / grid.spacing(0);
          }
          if (grid.dim() == 2) {
            const double hl = upwind(V.face_y(i, j), j > 0 ? u[grid.index(i, j - 1)] : 0.0,
                                     u[c]);
            const double hr = upwind(V.face_y(i, j + 1), u[c],
                                     j + 1 < ny ? u[grid.index(i, j + 1)] : 0.0);
            divflux += (hr - hl) / grid.spacing(1);
            if (j == 0) boundary_outflux -= hl * vol / grid.spacing(1);
            if (j + 1 == ny) boundary_outflux += hr * vol / grid.spacing(1);
          }
          unew[c] = u[c] + dt * (f[c] - divflux);
        }
      double mass_old = 0.0, mass_new = 0.0, source = 0.0;
      for (std::size_t c = 0; c < u.size(); ++c) {
        mass_old += u[c];
        mass_new += unew[c];
        source += f[c];
      }
      const double defect = std::abs((mass_new - mass_old) * vol -
                                     dt * (source * vol - boundary_outflux));
      sol.mass_balance_error = std::max(sol.mass_balance_error, defect);
      std::swap(u, unew);
      sol.min_value = std::min(sol.min_value, u.min());
      sol.max_value = std::max(sol.max_value, u.max());
    }
    sol.states.push_back(u);
  }
  return sol;
}

bool BVWindowReport::bounded(double factor) const {
  if (tv_weighted.empty()) return true;
  double mx = 0.0;
  for (double t : tv_weighted) mx = std::max(mx, t);
  return mx <= factor * tv_weighted.front();
}

BVWindowReport bv_window(const Grid& grid, const VectorFieldSpec& V, double lambda,
                         double h, const std::vector<BVWindowEntry>& entries) {
  BVWindowReport rep;
  rep.window_h = h;
  rep.lambda = lambda;
  const DriftThresholds thr = compute_thresholds(V);
  rep.lambda1 = thr.lambda1;
  rep.lambda1_finite = std::isfinite(thr.lambda1);
  CutoffFamily omega = build_cutoff(grid, h, CutoffKind::OmegaH);
  Field lap_plus = discrete_laplacian(grid, omega.values);
  for (auto& x : lap_plus.values()) x = std::max(x, 0.0);
  for (const auto& e : entries) {
    rep.m_values.push_back(e.m);
    rep.tv_weighted.push_back(tv_weighted(grid, *e.v, omega.values));
    rep.rhs_pressure_term.push_back(lambda * tv_weighted(grid, *e.p, lap_plus));
  }
  return rep;
}

std::vector<unsigned char> congestion_mask(const Grid& grid, const Field& p,
                                           double threshold) {
  const std::size_t n = grid.cell_count();
  std::vector<unsigned char> bytes((n + 7) / 8, 0);
  for (std::size_t c = 0; c < n; ++c)
    if (p[c] > threshold) bytes[c / 8] |= static_cast<unsigned char>(1u << (c % 8));
  return bytes;
}

}  // namespace pmdrift
