#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "stochwave/errors.hpp"
#include "stochwave/fem1d.hpp"
#include "test_util.hpp"

using namespace stochwave;
using namespace stochwave::fem;
using Catch::Approx;
using std::numbers::pi;

TEST_CASE("mass matrix entries and row sums", "[fem]") {
  Grid1D g2(2);
  TriDiag m2 = assemble_mass(g2);
  REQUIRE(m2.dim() == 1);
  CHECK(m2.diag[0] == Approx(1.0 / 3.0).epsilon(1e-15));

  Grid1D g4(4);
  TriDiag m4 = assemble_mass(g4);
  REQUIRE(m4.dim() == 3);
  for (double d : m4.diag) CHECK(d == Approx(1.0 / 6.0).epsilon(1e-15));
  for (double s : m4.sub) CHECK(s == Approx(1.0 / 24.0).epsilon(1e-15));

  // partition of unity: interior row sums equal h
  Grid1D g(32);
  TriDiag m = assemble_mass(g);
  NodalVec ones(g.n_interior(), 1.0);
  NodalVec row = fem::apply(m, ones);
  for (int i = 1; i + 1 < g.n_interior(); ++i) {
    CHECK(row[i] == Approx(g.h()).epsilon(1e-14));
  }
}

TEST_CASE("stiffness matrix entries and kernel", "[fem]") {
  Grid1D g2(2);
  TriDiag k2 = assemble_stiffness(g2);
  REQUIRE(k2.dim() == 1);
  CHECK(k2.diag[0] == Approx(4.0).epsilon(1e-15));

  Grid1D g(32);
  TriDiag k = assemble_stiffness(g);
  NodalVec ones(g.n_interior(), 1.0);
  NodalVec row = fem::apply(k, ones);
  // constants are in the kernel away from the boundary
  for (int i = 1; i + 1 < g.n_interior(); ++i) {
    CHECK(std::abs(row[i]) < 1e-12);
  }
}

TEST_CASE("Rayleigh quotient of the first sine mode approaches pi^2", "[fem]") {
  double prev_err = 0.0;
  for (int n : {16, 32, 64}) {
    Grid1D g(n);
    NodalVec v = interpolate([](double x) { return std::sin(pi * x); }, g);
    double rq = quad_form(assemble_stiffness(g), v) /
                quad_form(assemble_mass(g), v);
    double err = std::abs(rq - pi * pi);
    // continuum expansion: rq - pi^2 ~ pi^4 h^2 / 12
    CHECK(err < 1.3 * std::pow(pi, 4) * g.h() * g.h() / 12.0);
    if (prev_err > 0.0) {
      CHECK(prev_err / err == Approx(4.0).margin(0.5));
    }
    prev_err = err;
  }
}

TEST_CASE("tridiagonal solver matches identity and hand example", "[fem]") {
  TriDiag eye;
  eye.diag.assign(5, 1.0);
  eye.sub.assign(4, 0.0);
  eye.sup.assign(4, 0.0);
  NodalVec r = {1.0, -2.0, 3.0, 0.5, 0.0};
  CHECK(testutil::bitwise_equal(solve_tridiag(eye, r), r));

  // scalar system from the scheme: (1/3 + k^2/2 * 4) x = 1 with k = 1/4
  TriDiag a;
  a.diag = {1.0 / 3.0 + (1.0 / 16.0) * 0.5 * 4.0};
  NodalVec x = solve_tridiag(a, std::vector<double>{1.0});
  CHECK(x[0] == Approx(24.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("tridiagonal solver agrees with dense elimination", "[fem]") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> rhs_dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 8;
    TriDiag t = testutil::random_dd_tridiag(n, rng);
    std::vector<double> b(n);
    for (double& v : b) v = rhs_dist(rng);
    NodalVec x = solve_tridiag(t, b);
    std::vector<double> y = testutil::dense_solve(testutil::to_dense(t), b);
    for (int i = 0; i < n; ++i) {
      CHECK(x[i] == Approx(y[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("factor once, solve many reproduces A x = b up to roundoff", "[fem]") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n : {10, 100, 1000}) {
    TriDiag t = testutil::random_dd_tridiag(n, rng);
    TriDiagSolver solver(t);
    for (int trial = 0; trial < 3; ++trial) {
      NodalVec x_true(n);
      for (double& v : x_true) v = dist(rng);
      NodalVec b = fem::apply(t, x_true);
      NodalVec x = solver.solve(b);
      for (int i = 0; i < n; ++i) {
        CHECK(x[i] == Approx(x_true[i]).epsilon(1e-12).margin(1e-12));
      }
    }
  }
}

TEST_CASE("solver rejects singular and mismatched systems", "[fem]") {
  TriDiag z;
  z.diag = {0.0};
  CHECK_THROWS_AS(TriDiagSolver(z), SingularMatrixError);

  TriDiag a;
  a.diag = {1.0, 1.0};
  a.sub = {0.0};
  a.sup = {0.0};
  TriDiagSolver solver(a);
  std::vector<double> bad(3, 0.0);
  std::vector<double> out(3, 0.0);
  CHECK_THROWS_AS(solver.solve(bad, out), DimensionError);
  CHECK_THROWS_AS(quad_form(a, bad), DimensionError);
}

TEST_CASE("norms: zero, homogeneity, sine values", "[fem]") {
  Grid1D g(64);
  TriDiag m = assemble_mass(g);
  TriDiag k = assemble_stiffness(g);

  NodalVec zero(g.n_interior(), 0.0);
  CHECK(l2_norm(zero, m) == 0.0);
  CHECK(h1_seminorm(zero, k) == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  NodalVec u(g.n_interior());
  for (double& v : u) v = dist(rng);
  for (double c : {-3.0, 0.25, 17.0}) {
    NodalVec cu = u;
    for (double& v : cu) v *= c;
    CHECK(l2_norm(cu, m) == Approx(std::abs(c) * l2_norm(u, m)).epsilon(1e-13));
    CHECK(h1_seminorm(cu, k) ==
          Approx(std::abs(c) * h1_seminorm(u, k)).epsilon(1e-13));
  }

  NodalVec s = interpolate([](double x) { return std::sin(pi * x); }, g);
  CHECK(l2_norm(s, m) == Approx(std::sqrt(0.5)).margin(1e-3));
  CHECK(h1_seminorm(s, k) == Approx(pi * std::sqrt(0.5)).margin(2e-2));
}

TEST_CASE("mass-form of sine interpolants converges at O(h^2)", "[fem]") {
  for (int j : {1, 2, 3}) {
    double prev_err = 0.0;
    for (int n : {16, 32, 64}) {
      Grid1D g(n);
      NodalVec s =
          interpolate([j](double x) { return std::sin(j * pi * x); }, g);
      double q = quad_form(assemble_mass(g), s);
      double err = std::abs(q - 0.5);
      if (prev_err > 0.0) {
        CHECK(prev_err / err == Approx(4.0).margin(0.6));
      }
      prev_err = err;
    }
  }
}

TEST_CASE("matrices are symmetric positive definite on random vectors", "[fem]") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n : {2, 5, 33}) {
    Grid1D g(n + 1);
    TriDiag m = assemble_mass(g);
    TriDiag k = assemble_stiffness(g);
    CHECK(testutil::bitwise_equal(m.sub, m.sup));
    CHECK(testutil::bitwise_equal(k.sub, k.sup));
    for (int trial = 0; trial < 10; ++trial) {
      NodalVec v(g.n_interior());
      for (double& x : v) x = dist(rng);
      bool nonzero = false;
      for (double x : v) nonzero |= (x != 0.0);
      if (!nonzero) continue;
      CHECK(quad_form(m, v) > 0.0);
      CHECK(quad_form(k, v) > 0.0);
    }
  }
}

TEST_CASE("interpolate: nodal identity, symmetry zero, non-finite", "[fem]") {
  Grid1D g4(4);
  NodalVec x = interpolate([](double t) { return t; }, g4);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == Approx(0.25).epsilon(1e-15));
  CHECK(x[1] == Approx(0.5).epsilon(1e-15));
  CHECK(x[2] == Approx(0.75).epsilon(1e-15));

  Grid1D g2(2);
  NodalVec s = interpolate([](double t) { return std::sin(2 * pi * t); }, g2);
  CHECK(std::abs(s[0]) < 1e-15);

  NodalVec z = interpolate([](double) { return 0.0; }, g4);
  for (double v : z) CHECK(v == 0.0);

  CHECK_THROWS_WITH(
      interpolate([](double t) { return t < 0.6 ? 0.0 : 1.0 / 0.0; }, g4),
      Catch::Matchers::ContainsSubstring("0.75"));
  CHECK(Grid1D(2).n_interior() == 1);
  CHECK_THROWS_AS(Grid1D(1), ConfigError);
}
