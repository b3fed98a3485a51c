#include <doctest.h>

#include <cmath>

#include "pmdrift/assembly.hpp"
#include "pmdrift/norms.hpp"
#include "pmdrift/rng.hpp"
#include "pmdrift/stationary.hpp"

using namespace pmdrift;

namespace {

Field bump(const Grid& g, double center, double width, double amplitude) {
  Field f = g.make_field();
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double r = std::abs(g.cell_center(c)[0] - center) / width;
    if (r < 1.0) {
      const double s = std::cos(0.5 * M_PI * r);
      f[c] = amplitude * s * s;
    }
  }
  return f;
}

VectorFieldSpec linear_drift(const Grid& g, double a, double c) {
  return VectorFieldSpec::sample(
      g, [a, c](double x, double) { return a * (x - c); }, nullptr,
      [a](double, double) { return a; });
}

/// Block-average a fine-grid field onto a coarser grid whose cell count
/// divides the fine one.
Field restrict_to(const Grid& coarse, const Grid& fine, const Field& uf) {
  const int ratio = fine.cells(0) / coarse.cells(0);
  Field out = coarse.make_field();
  for (int i = 0; i < coarse.cells(0); ++i) {
    double s = 0.0;
    for (int k = 0; k < ratio; ++k) s += uf[i * ratio + k];
    out[i] = s / ratio;
  }
  return out;
}

}  // namespace

TEST_CASE("regularization profile properties") {
  for (double m : {1.0, 3.0, 32.0, 256.0}) {
    for (double eps : {1e-1, 1e-4, 1e-9}) {
      RegularizedProfile prof{m, eps};
      CHECK(prof.value(0.0) == 0.0);
      // Strictly increasing on a lattice, odd symmetry.
      double prev = -std::numeric_limits<double>::infinity();
      for (double r : {-2.0, -1.0, -0.25, -1e-6, -1e-300, 0.0, 1e-300, 1e-6, 0.25, 1.0, 2.0}) {
        const double val = prof.value(r);
        CHECK(val > prev);
        CHECK(prof.value(-r) == doctest::Approx(-val).epsilon(1e-15));
        CHECK(std::isfinite(prof.derivative(r)));
        CHECK(prof.derivative(r) > 0.0);
        prev = val;
      }
    }
    // Pointwise convergence to r^{1/m} as eps -> 0.
    for (double r : {-2.0, -0.5, 0.0, 0.3, 1.0, 2.0}) {
      const double target = r == 0.0 ? 0.0 : (r > 0 ? std::pow(r, 1.0 / m) : -std::pow(-r, 1.0 / m));
      double prev_gap = std::numeric_limits<double>::infinity();
      for (double eps : {1e-2, 1e-4, 1e-6, 1e-9}) {
        RegularizedProfile prof{m, eps};
        const double gap = std::abs(prof.value(r) - target);
        CHECK(gap <= prev_gap + 1e-15);
        prev_gap = gap;
      }
      CHECK(prev_gap < 2e-9);
    }
  }
}

TEST_CASE("zero source gives the zero solution") {
  Grid g = Grid::make_1d(32);
  VectorFieldSpec V = linear_drift(g, 1.0, 0.5);
  for (double m : {1.0, 3.0, m_infinity}) {
    StationaryProblem prob{&g, &V, 0.4, m, g.make_field()};
    StationarySolution sol = solve_stationary(prob);
    CHECK(sol.v.max_abs() < 1e-12);
    CHECK(sol.p.max_abs() < 1e-12);
  }
}

TEST_CASE("lambda range is validated") {
  Grid g = Grid::make_1d(16);
  VectorFieldSpec V = linear_drift(g, -1.0, 0.0);  // lambda0 = 1
  StationaryProblem prob{&g, &V, 1.0, 2.0, g.make_field()};
  CHECK_THROWS_AS(solve_stationary(prob), LambdaOutOfRange);
  prob.lambda = -0.1;
  CHECK_THROWS_AS(solve_stationary(prob), LambdaOutOfRange);
  prob.lambda = 0.5;
  CHECK_NOTHROW(solve_stationary(prob));
}

TEST_CASE("bump solve: norm bounds and fine-grid agreement") {
  Grid g = Grid::make_1d(64);
  VectorFieldSpec V0 = VectorFieldSpec::zero(g);
  Field f = bump(g, 0.5, 0.2, 1.0);
  StationaryProblem prob{&g, &V0, 0.1, 3.0, f};
  StationarySolution sol = solve_stationary(prob);

  CHECK(l1_norm(g, sol.v) <= l1_norm(g, f) * (1.0 + 1e-10));
  CHECK(sol.v.max_abs() <= f.max_abs() * (1.0 + 1e-10));
  // p tracks v^m up to the regularization bias.
  for (std::size_t c = 0; c < sol.v.size(); ++c) {
    const double pm = std::pow(std::abs(sol.v[c]), 3.0) * (sol.v[c] < 0 ? -1.0 : 1.0);
    CHECK(sol.p[c] == doctest::Approx(pm).epsilon(1e-5).scale(1.0));
  }

  // Fine-grid self oracle: the same problem at 4x resolution, block-averaged
  // back, agrees within O(h).
  Grid gf = Grid::make_1d(256);
  VectorFieldSpec Vf = VectorFieldSpec::zero(gf);
  StationaryProblem probf{&gf, &Vf, 0.1, 3.0, bump(gf, 0.5, 0.2, 1.0)};
  StationarySolution solf = solve_stationary(probf);
  Field ref = restrict_to(g, gf, solf.v);
  CHECK(l1_distance(g, sol.v, ref) < 5.0 * g.spacing(0));
}

TEST_CASE("lq bound with finite lambda0 (V = -x, lambda = 0.5, q = 2)") {
  Grid g = Grid::make_1d(64);
  VectorFieldSpec V = linear_drift(g, -1.0, 0.0);
  Field f = bump(g, 0.4, 0.25, 1.5);
  StationaryProblem prob{&g, &V, 0.5, 2.0, f};
  StationarySolution sol = solve_stationary(prob);
  CHECK(lq_norm(g, sol.v, 2.0) <= 2.0 * lq_norm(g, f, 2.0) * (1.0 + 1e-10));

  auto rep = verify_stationary_estimates(sol, prob, {1.0, 2.0,
                                                     std::numeric_limits<double>::infinity()});
  CHECK(rep.pass(1e-8));
  CHECK(rep.lq_rows[1].bound == doctest::Approx(2.0 * lq_norm(g, f, 2.0)).epsilon(1e-12));
}

TEST_CASE("resolvent comparison, contraction and linear scaling") {
  Grid g = Grid::make_1d(64);
  VectorFieldSpec V = linear_drift(g, 1.0, 0.5);
  Rng rng(42);

  SUBCASE("order preservation") {
    for (int trial = 0; trial < 5; ++trial) {
      Field f1 = rng.field(g.cell_count(), -1.0, 1.0);
      Field f2 = f1;
      for (std::size_t c = 0; c < f2.size(); ++c) f2[c] += rng.uniform(0.0, 0.7);
      Field v1 = resolvent(0.5, 2.0, V, f1);
      Field v2 = resolvent(0.5, 2.0, V, f2);
      for (std::size_t c = 0; c < v1.size(); ++c) CHECK(v1[c] <= v2[c] + 1e-10);
    }
  }

  SUBCASE("L1 contraction on random pairs") {
    for (double m : {2.0, 5.0}) {
      for (int trial = 0; trial < 6; ++trial) {
        Field f1 = rng.field(g.cell_count(), -1.0, 1.0);
        Field f2 = rng.field(g.cell_count(), -1.0, 1.0);
        Field v1 = resolvent(0.5, m, V, f1);
        Field v2 = resolvent(0.5, m, V, f2);
        const double num = l1_distance(g, v1, v2);
        const double den = l1_distance(g, f1, f2);
        CHECK(num <= den * (1.0 + 1e-10));
      }
    }
  }

  SUBCASE("m = 1, V = 0 is linear in f") {
    VectorFieldSpec V0 = VectorFieldSpec::zero(g);
    Field f = bump(g, 0.5, 0.3, 1.0);
    Field v = resolvent(0.2, 1.0, V0, f);
    Field fs = f;
    fs *= 3.5;
    Field vs = resolvent(0.2, 1.0, V0, fs);
    for (std::size_t c = 0; c < v.size(); ++c)
      CHECK(vs[c] == doctest::Approx(3.5 * v[c]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("Newton Jacobian is an M-matrix under upwinding") {
  Grid g = Grid::make_1d(48);
  VectorFieldSpec V = linear_drift(g, -1.0, 0.7);
  fv::SpMat L = fv::laplacian_matrix(g);
  fv::SpMat D = fv::upwind_drift_matrix(V);
  const double lambda = 0.4;
  fv::SpMat I(g.cell_count(), g.cell_count());
  I.setIdentity();

  RegularizedProfile prof{4.0, 1e-3};
  Rng rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd bp(g.cell_count());
    for (std::size_t c = 0; c < g.cell_count(); ++c)
      bp[c] = prof.derivative(rng.uniform(-1.0, 1.0));
    fv::SpMat M0 = I + lambda * D;
    fv::SpMat J = lambda * L + fv::SpMat(M0 * bp.asDiagonal());
    auto check = fv::check_m_matrix(J);
    CHECK(check.pass(1e-12));
  }
}

TEST_CASE("continuation consistency in the regularization parameter") {
  Grid g = Grid::make_1d(64);
  VectorFieldSpec V0 = VectorFieldSpec::zero(g);
  Field f = bump(g, 0.5, 0.2, 1.0);
  SolverConfig cfg;
  StationaryProblem prob{&g, &V0, 0.1, 3.0, f};
  StationarySolution a = solve_stationary(prob, cfg);
  cfg.eps_floor *= 0.5;
  StationarySolution b = solve_stationary(prob, cfg);
  // Solutions at eps and eps/2 stay within a small multiple of eps in L1.
  CHECK(l1_distance(g, a.v, b.v) < 1e-6);
}

TEST_CASE("constrained resolvent (sign graph)") {
  Grid g = Grid::make_1d(64);
  VectorFieldSpec V = linear_drift(g, 1.0, 0.5);  // div V = 1, expansive

  SUBCASE("zero source") {
    auto [v, p] = resolvent_hs(0.5, V, g.make_field());
    CHECK(v.max_abs() < 1e-12);
    CHECK(p.max_abs() < 1e-12);
  }

  SUBCASE("transport regime source leaves the pressure at zero") {
    // 0 <= f <= div V = 1.
    Field f = g.make_field(0.5);
    auto [v, p] = resolvent_hs(0.5, V, f);
    CHECK(p.max_abs() < 1e-6);
    // v then solves the drift-only linear resolvent; assemble it directly.
    fv::SpMat D = fv::upwind_drift_matrix(V);
    fv::SpMat I(g.cell_count(), g.cell_count());
    I.setIdentity();
    fv::SpMat A = I + 0.5 * D;
    Eigen::VectorXd rhs(g.cell_count());
    for (std::size_t c = 0; c < g.cell_count(); ++c) rhs[c] = f[c];
    Eigen::VectorXd vd = fv::solve_sparse(A, rhs, g, 1e-13);
    for (std::size_t c = 0; c < g.cell_count(); ++c)
      CHECK(v[c] == doctest::Approx(vd[c]).epsilon(1e-6).scale(1.0));
  }

  SUBCASE("capacity-exceeding source congests; large-m resolvent agrees") {
    Field f = bump(g, 0.5, 0.3, 2.0);
    auto [v, p] = resolvent_hs(0.5, V, f);
    CHECK(v.max_abs() <= 1.0 + 1e-9);
    int congested = 0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (p[c] > 1e-7) {
        ++congested;
        CHECK(v[c] >= 1.0 - 1e-6);
      }
    }
    CHECK(congested > 0);
    Field vm = resolvent(0.5, 256.0, V, f);
    CHECK(l1_distance(g, v, vm) < 0.05);
  }
}

TEST_CASE("stationary estimate report on the zero and energy cases") {
  Grid g = Grid::make_1d(64);
  VectorFieldSpec V0 = VectorFieldSpec::zero(g);

  SUBCASE("zero source: slacks equal the bounds") {
    StationaryProblem prob{&g, &V0, 0.3, 3.0, g.make_field()};
    StationarySolution sol = solve_stationary(prob);
    auto rep = verify_stationary_estimates(sol, prob, {1.0, 2.0});
    for (const auto& row : rep.lq_rows) {
      CHECK(row.measured == doctest::Approx(0.0));
      CHECK(row.slack == doctest::Approx(row.bound));
    }
    CHECK(rep.pass(1e-10));
  }

  SUBCASE("m = 3 bump: energy slack nonnegative by quadrature") {
    Field f = bump(g, 0.5, 0.2, 1.0);
    StationaryProblem prob{&g, &V0, 0.1, 3.0, f};
    StationarySolution sol = solve_stationary(prob);
    auto rep = verify_stationary_estimates(sol, prob,
                                           {1.0, 2.0, std::numeric_limits<double>::infinity()});
    CHECK(rep.energy_slack >= -1e-8 * (1.0 + std::abs(rep.energy_rhs)));
    CHECK(rep.pass(1e-8));
  }
}

TEST_CASE("2D stationary smoke: bounds hold on a small square") {
  Grid g = Grid::make_2d(16, 16);
  VectorFieldSpec V = VectorFieldSpec::sample(
      g, [](double x, double) { return x - 0.5; }, [](double, double y) { return y - 0.5; },
      [](double, double) { return 2.0; });
  Field f = g.make_field();
  for (std::size_t c = 0; c < f.size(); ++c) {
    auto x = g.cell_center(c);
    const double r2 = (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5);
    f[c] = r2 < 0.09 ? 1.0 : 0.0;
  }
  StationaryProblem prob{&g, &V, 0.25, 4.0, f};
  StationarySolution sol = solve_stationary(prob);
  CHECK(l1_norm(g, sol.v) <= l1_norm(g, f) * (1.0 + 1e-10));
  CHECK(sol.v.max_abs() <= f.max_abs() * (1.0 + 1e-10));
  auto rep = verify_stationary_estimates(sol, prob, {1.0, 2.0});
  CHECK(rep.pass(1e-8));
}
