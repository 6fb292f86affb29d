#include "stochwave/scheme.hpp"

#include <cmath>
#include <string>

#include "stochwave/dyadic.hpp"
#include "stochwave/errors.hpp"

namespace stochwave::scheme {

namespace {

constexpr double kBlowUpThreshold = 1e12;

fem::TriDiag system_matrix(const fem::TriDiag& mass, const fem::TriDiag& stiffness,
                           double gamma_plus, double k) {
  fem::TriDiag s = mass;
  double c = gamma_plus * k * k;
  for (std::size_t i = 0; i < s.diag.size(); ++i) s.diag[i] += c * stiffness.diag[i];
  for (std::size_t i = 0; i < s.sub.size(); ++i) {
    s.sub[i] += c * stiffness.sub[i];
    s.sup[i] += c * stiffness.sup[i];
  }
  return s;
}

void check_finite(int step_index, const fem::NodalVec& u, const fem::NodalVec& v) {
  double max_abs = 0.0;
  bool bad = false;
  for (double x : u) {
    if (!std::isfinite(x)) bad = true;
    max_abs = std::max(max_abs, std::abs(x));
  }
  for (double x : v) {
    if (!std::isfinite(x)) bad = true;
    max_abs = std::max(max_abs, std::abs(x));
  }
  if (bad || max_abs > kBlowUpThreshold) {
    throw BlowUpError(step_index, max_abs);
  }
}

void check_increments(const SchemeParams& params, const noise::IncrementSet& inc,
                      int step_index) {
  if (inc.k() != params.k) {
    throw ConfigError("increment set was built for step " + format_dyadic(inc.k()) +
                      ", scheme runs at " + format_dyadic(params.k));
  }
  if (step_index >= inc.n_steps()) {
    throw ConfigError("increments for step " + std::to_string(step_index) +
                      " are missing (set covers " + std::to_string(inc.n_steps()) +
                      " steps)");
  }
}

}  // namespace

void SchemeParams::validate() const {
  if (alpha_hat != 0 && alpha_hat != 1) {
    throw ConfigError("alpha_hat must be 0 or 1, got " + std::to_string(alpha_hat));
  }
  if (!(beta >= 0.0) || beta >= 0.5) {
    throw ConfigError("beta must lie in [0, 1/2), got " + std::to_string(beta));
  }
  dyadic_level(k);
  double steps = horizon / k;
  if (!(steps >= 1.0) || steps != std::floor(steps)) {
    throw ConfigError("horizon must be an integer multiple of k");
  }
}

int SchemeParams::n_steps() const {
  return static_cast<int>(std::floor(horizon / k + 0.5));
}

double SchemeParams::gamma_plus() const {
  return 0.5 * (1.0 + beta * std::pow(k, beta));
}

double SchemeParams::gamma_minus() const {
  return 0.5 * (1.0 - beta * std::pow(k, beta));
}

SchemeOperators::SchemeOperators(const fem::Grid1D& grid, const SchemeParams& params,
                                 int n_modes, noise::ModeShape shape)
    : grid_(grid),
      params_(params),
      mass_(fem::assemble_mass(grid)),
      stiffness_(fem::assemble_stiffness(grid)),
      solver_(system_matrix(mass_, stiffness_, params.gamma_plus(), params.k)),
      modes_(n_modes, grid, shape) {
  params_.validate();
}

SchemeState init_state(const model::Problem& p, const SchemeOperators& ops,
                       const noise::IncrementSet& inc) {
  const SchemeParams& params = ops.params();
  check_increments(params, inc, 0);
  const fem::Grid1D& grid = ops.grid();
  const double k = params.k;
  const int n = grid.n_interior();

  SchemeState s;
  s.u_prev = fem::interpolate(p.u0, grid);
  s.v_prev = fem::interpolate(p.v0, grid);

  fem::NodalVec lap;
  if (p.laplace_u0) {
    lap = fem::interpolate(p.laplace_u0, grid);
  } else {
    // discrete Laplacian -M^{-1} K u0
    fem::NodalVec ku = fem::apply(ops.stiffness(), s.u_prev);
    lap = fem::solve_tridiag(ops.mass(), ku);
    for (double& x : lap) x = -x;
  }

  fem::NodalVec dw_field(n);
  ops.modes().combine(inc.dw(0), dw_field);

  // v^1 = (u^1 - u^0) / k: the two-step method's stability and convergence
  // analysis both use u^1 - u^0 = k v^1 at the first step, and the discrete
  // energy identity telescopes from n = 1 only under that relation. k is a
  // power of two, so the division is exact and conservation holds bitwise.
  s.u_curr.resize(n);
  s.v_curr.resize(n);
  for (int i = 0; i < n; ++i) {
    double u0 = s.u_prev[i];
    double v0 = s.v_prev[i];
    double noise0 = p.sigma(u0, v0) * dw_field[i];
    double drift0 = p.drift(u0, v0);
    s.u_curr[i] = u0 + k * v0 + 0.5 * k * k * lap[i] + k * k * drift0 +
                  (k + k * k) * noise0;
    s.v_curr[i] = (s.u_curr[i] - u0) / k;
  }
  s.n = 1;
  check_finite(1, s.u_curr, s.v_curr);
  return s;
}

SchemeState step(const SchemeState& state, const model::Problem& p,
                 const SchemeOperators& ops, const noise::IncrementSet& inc) {
  if (state.n < 1) {
    throw ConfigError("step requires an initialized state (n >= 1)");
  }
  const SchemeParams& params = ops.params();
  check_increments(params, inc, state.n);

  const double k = params.k;
  const double gp = params.gamma_plus();
  const double gm = params.gamma_minus();
  const double alpha = static_cast<double>(params.alpha_hat);
  const int n_nodes = ops.grid().n_interior();
  const fem::TriDiag& mass = ops.mass();
  const fem::TriDiag& stiff = ops.stiffness();

  fem::NodalVec dw_field(n_nodes), dw_hat_field(n_nodes);
  ops.modes().combine(inc.dw(state.n), dw_field);
  ops.modes().combine(inc.dw_hat(state.n), dw_hat_field);

  // nodal source g = sigma dW + alpha D_u sigma v dW_hat + AB2 drift term
  fem::NodalVec g(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    double u = state.u_curr[i];
    double v_half = 0.5 * (state.v_curr[i] + state.v_prev[i]);
    double value = p.sigma(u, v_half) * dw_field[i];
    if (params.alpha_hat != 0) {
      value += alpha * p.d_sigma_du(u, v_half) * state.v_curr[i] * dw_hat_field[i];
    }
    value += 0.5 * k *
             (3.0 * p.drift(state.u_curr[i], state.v_curr[i]) -
              p.drift(state.u_prev[i], state.v_prev[i]));
    g[i] = value;
  }

  // rhs = M v^n - k K (g+ u^n + g- u^{n-1}) + M g
  fem::NodalVec combo(n_nodes);
  for (int i = 0; i < n_nodes; ++i) combo[i] = gp * state.u_curr[i] + gm * state.u_prev[i];
  fem::NodalVec k_combo = fem::apply(stiff, combo);

  fem::NodalVec m_target(n_nodes);
  for (int i = 0; i < n_nodes; ++i) m_target[i] = state.v_curr[i] + g[i];
  fem::NodalVec rhs = fem::apply(mass, m_target);
  for (int i = 0; i < n_nodes; ++i) rhs[i] -= k * k_combo[i];

  SchemeState next;
  next.v_curr = ops.solver().solve(rhs);
  next.u_curr.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    next.u_curr[i] = state.u_curr[i] + k * next.v_curr[i];
  }
  next.u_prev = state.u_curr;
  next.v_prev = state.v_curr;
  next.n = state.n + 1;
  check_finite(next.n, next.u_curr, next.v_curr);
  return next;
}

EnergyReport energy(const SchemeState& s, const fem::TriDiag& mass,
                    const fem::TriDiag& stiffness) {
  EnergyReport r;
  r.kinetic = 0.5 * fem::quad_form(mass, s.v_curr);
  r.elastic = 0.5 * fem::quad_form(stiffness, s.u_curr);
  r.total = r.kinetic + r.elastic;
  return r;
}

double conserved_two_step_energy(const SchemeState& s, const fem::TriDiag& mass,
                                 const fem::TriDiag& stiffness) {
  return 0.5 * fem::quad_form(mass, s.v_curr) +
         0.25 * (fem::quad_form(stiffness, s.u_curr) +
                 fem::quad_form(stiffness, s.u_prev));
}

SchemeState simulate(const model::Problem& p, const SchemeOperators& ops,
                     const noise::IncrementSet& inc,
                     const std::function<void(const SchemeState&)>& observer) {
  const int total = ops.params().n_steps();
  SchemeState state = init_state(p, ops, inc);
  if (observer) observer(state);
  while (state.n < total) {
    state = step(state, p, ops, inc);
    if (observer) observer(state);
  }
  return state;
}

}  // namespace stochwave::scheme
