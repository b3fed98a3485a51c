#include <doctest.h>

#include <cmath>

#include "pmdrift/norms.hpp"
#include "pmdrift/reaction.hpp"
#include "pmdrift/rng.hpp"

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

/// Sampled difference-quotient check of the slope envelope.
double worst_slope_excess(const ReactionSpec& spec, const Grid& g, Rng& rng, int trials) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    const double t = rng.uniform(0.0, 1.0);
    const auto x = g.cell_center(static_cast<std::size_t>(rng.uniform() * g.cell_count()));
    double r1 = rng.uniform(-2.0, 2.0);
    double r2 = rng.uniform(-2.0, 2.0);
    if (r1 == r2) continue;
    if (r1 > r2) std::swap(r1, r2);
    const double quot = (spec.g(t, x, r2) - spec.g(t, x, r1)) / (r2 - r1);
    double theta_max = 0.0;
    for (int j = 0; j <= 20; ++j)
      theta_max = std::max(theta_max, spec.theta(r1 + (r2 - r1) * j / 20.0));
    worst = std::max(worst, quot - theta_max);
  }
  return worst;
}

}  // namespace

TEST_CASE("slope envelope holds for the built-in kinds") {
  Grid g = Grid::make_1d(32);
  Rng rng(3);
  ReactionSpec lin = ReactionSpec::linear(0.7);
  ReactionSpec quad = ReactionSpec::quadratic();
  ReactionSpec cst = ReactionSpec::constant_source(g, bump(g, 0.5, 0.2, 1.0));
  CHECK(worst_slope_excess(lin, g, rng, 200) <= 1e-12);
  CHECK(worst_slope_excess(quad, g, rng, 200) <= 1e-12);
  CHECK(worst_slope_excess(cst, g, rng, 200) <= 1e-12);
}

TEST_CASE("closed-form barriers") {
  Grid g = Grid::make_1d(32);

  SUBCASE("g = 0 with expansive drift keeps the unit envelope") {
    VectorFieldSpec V = linear_drift(g, 1.0, 0.5);  // div V = 1 >= 0
    ReactionSpec spec = ReactionSpec::constant_source(g, g.make_field());
    Field u0 = g.make_field(1.0);
    BarrierPair b = build_barriers(spec, g, u0, V, 1.0, 10);
    for (const auto& s : b.samples) {
      CHECK(s.upper == doctest::Approx(1.0));
      CHECK(s.lower == doctest::Approx(-1.0));
    }
    CHECK(barrier_residual_margin(spec, g, V, b) >= -1e-12);
  }

  SUBCASE("pure source with unit sup norm grows linearly from zero data") {
    VectorFieldSpec V0 = VectorFieldSpec::zero(g);
    ReactionSpec spec = ReactionSpec::constant_source(g, g.make_field(1.0));
    BarrierPair b = build_barriers(spec, g, g.make_field(), V0, 1.0, 10);
    for (const auto& s : b.samples) CHECK(s.upper == doctest::Approx(s.t).epsilon(1e-12));
  }

  SUBCASE("quadratic kind matches 1/(1-t) and rejects long horizons") {
    VectorFieldSpec V = linear_drift(g, 1.0, 0.5);
    ReactionSpec spec = ReactionSpec::quadratic();
    Field u0 = g.make_field(1.0);
    BarrierPair b = build_barriers(spec, g, u0, V, 0.5, 10);
    for (const auto& s : b.samples) {
      CHECK(s.upper == doctest::Approx(1.0 / (1.0 - s.t)).epsilon(1e-12));
      CHECK(s.lower == doctest::Approx(-1.0 / (1.0 + s.t)).epsilon(1e-12));
    }
    CHECK(barrier_residual_margin(spec, g, V, b) >= -1e-12);
    CHECK_THROWS_AS(build_barriers(spec, g, u0, V, 1.5, 10), HorizonTooLong);
    CHECK_THROWS_AS(build_barriers(spec, g, u0, V, 1.0, 10), HorizonTooLong);
  }

  SUBCASE("linear kind residual margin") {
    VectorFieldSpec V = linear_drift(g, -1.0, 0.0);  // (div V)^- = 1
    ReactionSpec spec = ReactionSpec::linear(0.5);
    BarrierPair b = build_barriers(spec, g, bump(g, 0.5, 0.3, 1.0), V, 1.0, 10);
    CHECK(barrier_residual_margin(spec, g, V, b) >= -1e-10);
  }
}

TEST_CASE("ODE-integrated barriers for a custom reaction") {
  Grid g = Grid::make_1d(32);
  VectorFieldSpec V = linear_drift(g, -0.5, 0.0);
  ReactionSpec spec = ReactionSpec::custom(
      [](double, std::array<double, 2>, double r) { return std::sin(r); },
      [](double) { return 1.0; });
  Field u0 = bump(g, 0.5, 0.3, 0.8);
  BarrierPair b = build_barriers(spec, g, u0, V, 1.0, 20);
  CHECK(b.provenance == BarrierProvenance::OdeIntegrated);
  CHECK(b.samples.size() == 21);
  CHECK(b.samples.front().upper == doctest::Approx(u0.max_abs()).epsilon(1e-12));
  // Residual tolerance reflects the explicit-midpoint integration error.
  CHECK(barrier_residual_margin(spec, g, V, b) >= -1e-6);
}

TEST_CASE("clamped map behavior") {
  Grid g = Grid::make_1d(32);
  ReactionSpec spec = ReactionSpec::linear(0.9);
  VectorFieldSpec V0 = VectorFieldSpec::zero(g);
  BarrierPair b = build_barriers(spec, g, g.make_field(1.0), V0, 0.5, 10);
  ClampedReactionMap F = clamp_map(spec, b);
  const double M = F.clamp_bound();
  CHECK(M == doctest::Approx(std::exp(0.45)).epsilon(1e-12));

  SUBCASE("identity inside the clamp interval, saturation outside") {
    Field z = g.make_field(0.5 * M);
    Field out = F(g, 0.0, z);
    for (double x : out.values()) CHECK(x == doctest::Approx(0.9 * 0.5 * M));
    Field big = g.make_field(2.0 * M);
    Field out2 = F(g, 0.0, big);
    for (double x : out2.values()) CHECK(x == doctest::Approx(0.9 * M));
  }

  SUBCASE("clamp idempotence") {
    Rng rng(9);
    Field z = rng.field(g.cell_count(), -3.0 * M, 3.0 * M);
    Field once = F(g, 0.3, z);
    // Applying the clamp to an already clamped argument changes nothing.
    Field zc = z;
    for (auto& x : zc.values()) x = std::clamp(x, -M, M);
    Field twice = F(g, 0.3, zc);
    CHECK(l1_distance(g, once, twice) == 0.0);
  }

  SUBCASE("sampled L1 Lipschitz constant stays at |c|") {
    Rng rng(17);
    double worst = 0.0;
    for (int k = 0; k < 40; ++k) {
      Field z1 = rng.field(g.cell_count(), -2.0 * M, 2.0 * M);
      Field z2 = rng.field(g.cell_count(), -2.0 * M, 2.0 * M);
      const double num = l1_distance(g, F(g, 0.1, z1), F(g, 0.1, z2));
      const double den = l1_distance(g, z1, z2);
      if (den > 0) worst = std::max(worst, num / den);
    }
    CHECK(worst <= 0.9 + 1e-12);
  }
}

TEST_CASE("confinement of reaction runs") {
  Grid g = Grid::make_1d(48);
  VectorFieldSpec V = linear_drift(g, 1.0, 0.5);  // div V = 1

  SUBCASE("g = 0, |u0| <= 1: trajectory confined to [-1, 1]") {
    ReactionSpec spec = ReactionSpec::constant_source(g, g.make_field());
    Field u0 = bump(g, 0.5, 0.3, 1.0);
    for (std::size_t c = 0; c < u0.size(); ++c) u0[c] -= 0.4;  // sign-changing
    BarrierPair b = build_barriers(spec, g, u0, V, 1.0, 10);
    PorousMediumOperator op(3.0, V);
    ClampedReactionMap F = clamp_map(spec, b);
    EulerScheme run = step_scheme_reaction(op, u0, F.as_state_source(g), 1.0, 10);
    auto rep = verify_confinement(run, b);
    CHECK(rep.pass(1e-8));
  }

  SUBCASE("linear reaction confined to the exponential envelope") {
    ReactionSpec spec = ReactionSpec::linear(0.5);
    Field u0 = bump(g, 0.5, 0.3, 1.0);
    BarrierPair b = build_barriers(spec, g, u0, V, 0.5, 20);
    PorousMediumOperator op(3.0, V);
    ClampedReactionMap F = clamp_map(spec, b);
    EulerScheme run = step_scheme_reaction(op, u0, F.as_state_source(g), 0.5, 20);
    auto rep = verify_confinement(run, b);
    CHECK(rep.pass(1e-8));
  }

  SUBCASE("custom reaction confined to ODE barriers") {
    ReactionSpec spec = ReactionSpec::custom(
        [](double, std::array<double, 2>, double r) { return std::sin(r); },
        [](double) { return 1.0; });
    Rng rng(23);
    Field u0(g.cell_count());
    for (std::size_t c = 0; c < u0.size(); ++c) u0[c] = rng.uniform(-0.6, 0.6);
    BarrierPair b = build_barriers(spec, g, u0, V, 0.5, 10);
    PorousMediumOperator op(2.0, V);
    ClampedReactionMap F = clamp_map(spec, b);
    EulerScheme run = step_scheme_reaction(op, u0, F.as_state_source(g), 0.5, 10);
    auto rep = verify_confinement(run, b);
    CHECK(rep.pass(1e-6));
  }

  SUBCASE("nonnegative data with nonnegative reaction stays nonnegative") {
    ReactionSpec spec = ReactionSpec::custom(
        [](double, std::array<double, 2>, double r) { return std::max(r, 0.0); },
        [](double) { return 1.0; });
    Field u0 = bump(g, 0.4, 0.2, 0.7);
    BarrierPair b = build_barriers(spec, g, u0, V, 0.5, 10);
    PorousMediumOperator op(2.0, V);
    ClampedReactionMap F = clamp_map(spec, b);
    EulerScheme run = step_scheme_reaction(op, u0, F.as_state_source(g), 0.5, 10);
    for (const auto& u : run.iterates)
      for (double x : u.values()) CHECK(x >= -1e-10);
  }
}
