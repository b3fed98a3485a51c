#include "pmdrift/reaction.hpp"

#include <algorithm>
#include <cmath>

namespace pmdrift {

ReactionSpec ReactionSpec::constant_source(const Grid& grid, Field f) {
  ReactionSpec s;
  s.kind = ReactionKind::ConstantInR;
  const double sup = f.max_abs();
  auto lookup = [f = std::move(f), &grid](std::array<double, 2> x) {
    // Recover the cell from the coordinates; sources are cell-sampled.
    int i = std::clamp(static_cast<int>((x[0] - grid.lo(0)) / grid.spacing(0)), 0,
                       grid.cells(0) - 1);
    int j = grid.dim() == 2 ? std::clamp(static_cast<int>((x[1] - grid.lo(1)) / grid.spacing(1)),
                                         0, grid.cells(1) - 1)
                            : 0;
    return f[grid.index(i, j)];
  };
  s.g = [lookup](double, std::array<double, 2> x, double) { return lookup(x); };
  s.theta = [](double) { return 0.0; };
  s.source_sup = [sup](double) { return sup; };
  return s;
}

ReactionSpec ReactionSpec::linear(double c) {
  ReactionSpec s;
  s.kind = ReactionKind::LinearInR;
  s.linear_coef = c;
  s.g = [c](double, std::array<double, 2>, double r) { return c * r; };
  s.theta = [c](double) { return std::abs(c); };
  return s;
}

ReactionSpec ReactionSpec::quadratic() {
  ReactionSpec s;
  s.kind = ReactionKind::Quadratic;
  s.g = [](double, std::array<double, 2>, double r) { return r * r; };
  s.theta = [](double r) { return 2.0 * std::abs(r); };
  return s;
}

ReactionSpec ReactionSpec::custom(
    std::function<double(double, std::array<double, 2>, double)> g,
    std::function<double(double)> theta) {
  ReactionSpec s;
  s.kind = ReactionKind::Custom;
  s.g = std::move(g);
  s.theta = std::move(theta);
  return s;
}

Field ReactionSpec::evaluate(const Grid& grid, double t, const Field& u) const {
  Field out(grid.cell_count());
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c] = g(t, grid.cell_center(c), u[c]);
  return out;
}

double BarrierPair::sup_abs() const {
  double m = 0.0;
  for (const auto& s : samples)
    m = std::max(m, std::max(std::abs(s.lower), std::abs(s.upper)));
  return m;
}

namespace {

// sup over cells of |g(t, x, r)|.
double sup_in_x(const ReactionSpec& spec, const Grid& grid, double t, double r) {
  double m = 0.0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c)
    m = std::max(m, std::abs(spec.g(t, grid.cell_center(c), r)));
  return m;
}

BarrierPair ode_barriers(const ReactionSpec& spec, const Grid& grid, double u0_sup,
                         double dneg, double T, int n) {
  // w' = w * dneg + max(sup_x |g(., w)|, sup_x |g(., -w)|), stepped at 10x the
  // scheme resolution with the explicit midpoint rule.
  const int refine = 10;
  const int fine_n = refine * n;
  const double dt = T / fine_n;
  auto rhs = [&](double t, double w) {
    return w * dneg + std::max(sup_in_x(spec, grid, t, w), sup_in_x(spec, grid, t, -w));
  };
  BarrierPair out;
  out.provenance = BarrierProvenance::OdeIntegrated;
  out.samples.reserve(n + 1);
  double w = u0_sup;
  out.samples.push_back({0.0, -w, w, -rhs(0.0, w), rhs(0.0, w)});
  for (int k = 1; k <= fine_n; ++k) {
    const double t = (k - 1) * dt;
    const double mid = w + 0.5 * dt * rhs(t, w);
    w += dt * rhs(t + 0.5 * dt, mid);
    if (!std::isfinite(w) || w > 1e12)
      throw HorizonTooLong("barrier ODE blows up before the requested horizon");
    if (k % refine == 0) {
      const double ts = static_cast<double>(k) / refine * (T / n);
      const double d = rhs(ts, w);
      out.samples.push_back({ts, -w, w, -d, d});
    }
  }
  return out;
}

}  // namespace

BarrierPair build_barriers(const ReactionSpec& spec, const Grid& grid, const Field& u0,
                           const VectorFieldSpec& V, double T, int n) {
  if (n < 1) throw InvalidArgument("build_barriers: need at least one step");
  const double U = u0.max_abs();
  const double dneg = V.div_negative_sup();
  const double dt = T / n;
  BarrierPair out;
  out.samples.reserve(n + 1);
  switch (spec.kind) {
    case ReactionKind::ConstantInR: {
      // w2(t) = (U + int_0^t sup|f|) e^{t dneg}, w1 = -w2.
      if (!spec.source_sup) throw BarrierUnavailable("constant kind needs source_sup");
      double integral = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        if (i > 0) {
          const int refine = 10;
          const double fdt = dt / refine;
          for (int k = 0; k < refine; ++k)
            integral += fdt * spec.source_sup(t - dt + (k + 0.5) * fdt);
        }
        const double e = std::exp(t * dneg);
        const double w = (U + integral) * e;
        const double d = spec.source_sup(t) * e + dneg * w;
        out.samples.push_back({t, -w, w, -d, d});
      }
      return out;
    }
    case ReactionKind::LinearInR: {
      const double rate = dneg + std::abs(spec.linear_coef);
      for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        const double w = U * std::exp(t * rate);
        out.samples.push_back({t, -w, w, -rate * w, rate * w});
      }
      return out;
    }
    case ReactionKind::Quadratic: {
      if (dneg > 0.0) return ode_barriers(spec, grid, U, dneg, T, n);
      if (U > 0.0 && T >= 1.0 / U)
        throw HorizonTooLong("quadratic reaction: horizon must satisfy T < 1/||u0||_inf");
      for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        const double up = U / (1.0 - t * U);
        const double lo = -U / (1.0 + t * U);
        out.samples.push_back({t, lo, up, lo * lo, up * up});
      }
      return out;
    }
    case ReactionKind::Custom:
      return ode_barriers(spec, grid, U, dneg, T, n);
  }
  throw BarrierUnavailable("unrecognized reaction kind");
}

double barrier_residual_margin(const ReactionSpec& spec, const Grid& grid,
                               const VectorFieldSpec& V, const BarrierPair& barriers) {
  double margin = std::numeric_limits<double>::infinity();
  const Field& div = V.divergence();
  for (const auto& s : barriers.samples) {
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      const auto x = grid.cell_center(c);
      const double upper_res = s.dupper + s.upper * div[c] - spec.g(s.t, x, s.upper);
      const double lower_res = spec.g(s.t, x, s.lower) - s.dlower - s.lower * div[c];
      margin = std::min(margin, std::min(upper_res, lower_res));
    }
  }
  return margin;
}

Field ClampedReactionMap::operator()(const Grid& grid, double t, const Field& z) const {
  Field out(grid.cell_count());
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c] = spec_->g(t, grid.cell_center(c), std::clamp(z[c], -M_, M_));
  return out;
}

StateSource ClampedReactionMap::as_state_source(const Grid& grid) const {
  return [this, &grid](double t, const Field& z) { return (*this)(grid, t, z); };
}

ClampedReactionMap clamp_map(const ReactionSpec& spec, const BarrierPair& barriers) {
  return ClampedReactionMap(spec, barriers.sup_abs());
}

ConfinementReport verify_confinement(const EulerScheme& traj, const BarrierPair& barriers) {
  ConfinementReport rep;
  const int n = traj.n;
  if (static_cast<int>(barriers.samples.size()) != n + 1)
    throw InvalidArgument("verify_confinement: barrier samples must match the step grid");
  for (int i = 0; i <= n; ++i) {
    const auto& s = barriers.samples[i];
    const Field& u = traj.iterates[i];
    for (double x : u.values()) {
      rep.worst_below = std::max(rep.worst_below, s.lower - x);
      rep.worst_above = std::max(rep.worst_above, x - s.upper);
    }
  }
  return rep;
}

}  // namespace pmdrift
