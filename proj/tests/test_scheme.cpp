#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "stochwave/dyadic.hpp"
#include "stochwave/errors.hpp"
#include "stochwave/scheme.hpp"
#include "test_util.hpp"

using namespace stochwave;
using namespace stochwave::scheme;
using Catch::Approx;
using std::numbers::pi;

namespace {

model::Problem silent_problem() {
  model::Problem p;
  p.label = "silent";
  p.drift = [](double, double) { return 0.0; };
  p.sigma = [](double, double) { return 0.0; };
  p.d_sigma_du = [](double, double) { return 0.0; };
  p.u0 = [](double x) { return std::sin(2 * pi * x); };
  p.v0 = [](double x) { return std::sin(3 * pi * x); };
  p.laplace_u0 = [](double x) { return -4 * pi * pi * std::sin(2 * pi * x); };
  return p;
}

noise::IncrementSet zero_increments(const SchemeParams& params, int modes = 3) {
  noise::NoiseConfig cfg;
  cfg.n_modes = modes;
  cfg.fine_level = 2 * dyadic_level(params.k);
  cfg.horizon = params.horizon;
  return coarse_increments(testutil::frozen_path(cfg, 0.0), params.k);
}

}  // namespace

TEST_CASE("parameter validation and gamma factors", "[scheme]") {
  SchemeParams good{1, 0.25, dyadic_value(4), 1.0};
  good.validate();
  CHECK(good.gamma_plus() == Approx(0.5625).epsilon(1e-15));
  CHECK(good.gamma_minus() == Approx(0.4375).epsilon(1e-15));
  CHECK(SchemeParams{0, 0.0, 0.25, 1.0}.gamma_plus() == 0.5);

  CHECK_THROWS_AS((SchemeParams{2, 0.0, 0.25, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SchemeParams{1, 0.5, 0.25, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SchemeParams{1, 0.75, 0.25, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SchemeParams{1, -0.1, 0.25, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SchemeParams{1, 0.0, 0.3, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SchemeParams{1, 0.0, 0.25, 1.1}.validate()), ConfigError);
}

TEST_CASE("zero data is a fixed point", "[scheme]") {
  model::Problem p = silent_problem();
  p.u0 = [](double) { return 0.0; };
  p.v0 = [](double) { return 0.0; };
  p.laplace_u0 = [](double) { return 0.0; };
  SchemeParams params{1, 0.0, dyadic_value(3), 1.0};
  fem::Grid1D grid(8);
  SchemeOperators ops(grid, params, 3);
  noise::IncrementSet inc = zero_increments(params);

  SchemeState s = init_state(p, ops, inc);
  for (int i = 0; i < 3; ++i) s = step(s, p, ops, inc);
  for (double v : s.u_curr) CHECK(v == 0.0);
  for (double v : s.v_curr) CHECK(v == 0.0);
}

TEST_CASE("first step matches the closed form for sigma = F = 0", "[scheme]") {
  model::Problem p = silent_problem();
  p.v0 = [](double) { return 0.0; };
  const double k = dyadic_value(4);
  SchemeParams params{1, 0.0, k, 1.0};
  fem::Grid1D grid(16);
  SchemeOperators ops(grid, params, 3);
  noise::IncrementSet inc = zero_increments(params);

  SchemeState s = init_state(p, ops, inc);
  REQUIRE(s.n == 1);
  const double factor = 1.0 - 2.0 * pi * pi * k * k;
  for (int i = 0; i < grid.n_interior(); ++i) {
    CHECK(s.u_curr[i] ==
          Approx(std::sin(2 * pi * grid.node(i)) * factor).epsilon(1e-13));
    // v^1 is the exact divided difference; k is a power of two
    CHECK(s.v_curr[i] == (s.u_curr[i] - s.u_prev[i]) / k);
  }
}

TEST_CASE("hand-computed step on the one-node grid", "[scheme]") {
  // n_cells = 2, beta = 0, k = 1/4: M = [1/3], K = [4]
  model::Problem p = silent_problem();
  SchemeParams params{1, 0.0, 0.25, 1.0};
  fem::Grid1D grid(2);
  SchemeOperators ops(grid, params, 1);
  noise::IncrementSet inc = zero_increments(params, 1);

  SchemeState s;
  s.n = 1;
  s.u_prev = {1.0};
  s.u_curr = {1.0};
  s.v_prev = {0.0};
  s.v_curr = {0.0};

  double before = conserved_two_step_energy(s, ops.mass(), ops.stiffness());
  CHECK(before == Approx(2.0).epsilon(1e-15));

  SchemeState next = step(s, p, ops, inc);
  CHECK(next.v_curr[0] == Approx(-24.0 / 11.0).epsilon(1e-14));
  CHECK(next.u_curr[0] == Approx(5.0 / 11.0).epsilon(1e-14));
  CHECK(next.n == 2);

  double after = conserved_two_step_energy(next, ops.mass(), ops.stiffness());
  CHECK(after == Approx(2.0).epsilon(1e-13));

  SchemeState zero_state;
  zero_state.n = 1;
  zero_state.u_prev = {0.0};
  zero_state.u_curr = {0.0};
  zero_state.v_prev = {0.0};
  zero_state.v_curr = {0.0};
  CHECK(conserved_two_step_energy(zero_state, ops.mass(), ops.stiffness()) == 0.0);
}

TEST_CASE("energy of interpolated sine modes", "[scheme]") {
  fem::Grid1D grid(128);
  fem::TriDiag m = fem::assemble_mass(grid);
  fem::TriDiag k = fem::assemble_stiffness(grid);

  SchemeState s;
  s.n = 1;
  s.u_curr = fem::interpolate([](double x) { return std::sin(2 * pi * x); }, grid);
  s.u_prev.assign(grid.n_interior(), 0.0);
  s.v_curr.assign(grid.n_interior(), 0.0);
  s.v_prev = s.v_curr;
  EnergyReport ela = energy(s, m, k);
  CHECK(ela.elastic == Approx(pi * pi).epsilon(0.01));
  CHECK(ela.kinetic == 0.0);
  CHECK(ela.total == ela.elastic + ela.kinetic);

  s.u_curr.assign(grid.n_interior(), 0.0);
  s.v_curr = fem::interpolate([](double x) { return std::sin(3 * pi * x); }, grid);
  EnergyReport kin = energy(s, m, k);
  CHECK(kin.kinetic == Approx(0.25).epsilon(0.01));
  CHECK(kin.elastic == 0.0);

  SchemeState z;
  z.n = 1;
  z.u_curr.assign(grid.n_interior(), 0.0);
  z.u_prev = z.u_curr;
  z.v_curr = z.u_curr;
  z.v_prev = z.u_curr;
  EnergyReport zero = energy(z, m, k);
  CHECK(zero.total == 0.0);
}

TEST_CASE("deterministic two-step energy is conserved to roundoff", "[scheme]") {
  model::Problem p = silent_problem();
  for (int alpha : {0, 1}) {
    SchemeParams params{alpha, 0.0, dyadic_value(6), 1.0};
    fem::Grid1D grid(16);
    SchemeOperators ops(grid, params, 3);
    noise::IncrementSet inc = zero_increments(params);

    SchemeState s = init_state(p, ops, inc);
    const double e0 = conserved_two_step_energy(s, ops.mass(), ops.stiffness());
    while (s.n < params.n_steps()) {
      s = step(s, p, ops, inc);
      double e = conserved_two_step_energy(s, ops.mass(), ops.stiffness());
      CHECK(std::abs(e - e0) / e0 < 1e-12);
    }
  }
}

TEST_CASE("beta adds monotone dissipation in the deterministic case", "[scheme]") {
  model::Problem p = silent_problem();
  for (double beta : {0.25, 0.49}) {
    SchemeParams params{1, beta, dyadic_value(5), 1.0};
    fem::Grid1D grid(32);
    SchemeOperators ops(grid, params, 3);
    noise::IncrementSet inc = zero_increments(params);

    SchemeState s = init_state(p, ops, inc);
    double prev = conserved_two_step_energy(s, ops.mass(), ops.stiffness());
    bool strictly_dropped = false;
    while (s.n < params.n_steps()) {
      s = step(s, p, ops, inc);
      double e = conserved_two_step_energy(s, ops.mass(), ops.stiffness());
      CHECK(e <= prev * (1.0 + 1e-12));
      strictly_dropped |= (e < prev);
      prev = e;
    }
    CHECK(strictly_dropped);
  }
}

TEST_CASE("step does not mutate its inputs", "[scheme]") {
  model::Problem p = model::preset("sin-sigma");
  SchemeParams params{1, 0.0, dyadic_value(4), 1.0};
  fem::Grid1D grid(16);
  SchemeOperators ops(grid, params, 3);
  noise::NoiseConfig cfg;
  cfg.fine_level = 8;
  noise::IncrementSet inc = coarse_increments(noise::sample_path(cfg, 8), params.k);

  SchemeState s = init_state(p, ops, inc);
  SchemeState snapshot = s;
  SchemeState next = step(s, p, ops, inc);
  CHECK(testutil::bitwise_equal(s.u_prev, snapshot.u_prev));
  CHECK(testutil::bitwise_equal(s.u_curr, snapshot.u_curr));
  CHECK(testutil::bitwise_equal(s.v_prev, snapshot.v_prev));
  CHECK(testutil::bitwise_equal(s.v_curr, snapshot.v_curr));
  CHECK(s.n == snapshot.n);
  CHECK(next.n == s.n + 1);
  CHECK(testutil::bitwise_equal(next.u_prev, s.u_curr));
}

TEST_CASE("solution responds linearly to path scaling for additive noise", "[scheme]") {
  model::Problem p = silent_problem();
  p.sigma = [](double, double) { return 1.0; };  // additive

  SchemeParams params{1, 0.0, dyadic_value(4), 1.0};
  fem::Grid1D grid(16);
  SchemeOperators ops(grid, params, 3);

  noise::NoiseConfig cfg;
  cfg.fine_level = 8;
  noise::WienerPath path = noise::sample_path(cfg, 4711);
  noise::WienerPath doubled = testutil::scaled_path(path, 2.0);
  noise::WienerPath zero = testutil::scaled_path(path, 0.0);

  SchemeState base = simulate(p, ops, noise::coarse_increments(zero, params.k));
  SchemeState one = simulate(p, ops, noise::coarse_increments(path, params.k));
  SchemeState two = simulate(p, ops, noise::coarse_increments(doubled, params.k));

  for (int i = 0; i < grid.n_interior(); ++i) {
    double lhs = two.u_curr[i] - base.u_curr[i];
    double rhs = 2.0 * (one.u_curr[i] - base.u_curr[i]);
    CHECK(lhs == Approx(rhs).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("blow-up raises a structured error with the step index", "[scheme]") {
  model::Problem p = silent_problem();
  p.drift = [](double, double) { return 1e13; };
  SchemeParams params{1, 0.0, 0.25, 1.0};
  fem::Grid1D grid(8);
  SchemeOperators ops(grid, params, 3);
  noise::IncrementSet inc = zero_increments(params);

  SchemeState s = init_state(p, ops, inc);
  try {
    while (s.n < params.n_steps()) s = step(s, p, ops, inc);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.max_norm() > 1e12);
  }
}

TEST_CASE("missing increments are reported", "[scheme]") {
  model::Problem p = silent_problem();
  SchemeParams params{1, 0.0, 0.25, 1.0};
  fem::Grid1D grid(8);
  SchemeOperators ops(grid, params, 3);

  noise::IncrementSet wrong_k = zero_increments(SchemeParams{1, 0.0, 0.5, 1.0});
  CHECK_THROWS_AS(init_state(p, ops, wrong_k), ConfigError);

  noise::NoiseConfig cfg;
  cfg.fine_level = 8;
  cfg.horizon = 0.5;  // only two steps of size 1/4
  noise::IncrementSet short_inc =
      coarse_increments(testutil::frozen_path(cfg, 0.0), params.k);
  SchemeState s = init_state(p, ops, short_inc);
  s = step(s, p, ops, short_inc);
  CHECK_THROWS_AS(step(s, p, ops, short_inc), ConfigError);
}
