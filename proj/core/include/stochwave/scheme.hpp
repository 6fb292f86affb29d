#pragma once

#include <functional>

#include "stochwave/fem1d.hpp"
#include "stochwave/model.hpp"
#include "stochwave/noise.hpp"

namespace stochwave::scheme {

/// Parameters of the two-step implicit integrator. alpha_hat toggles the
/// Ito-correction term; beta in [0, 1/2) scales the numerical dissipation.
/// beta = 0 is only covered by the stability theory when sigma and F do not
/// depend on v; it is permitted and the caller owns that choice.
struct SchemeParams {
  int alpha_hat = 1;
  double beta = 0.0;
  double k = 0.0;      // dyadic time step
  double horizon = 1.0;

  void validate() const;  // throws ConfigError
  int n_steps() const;    // horizon / k
  double gamma_plus() const;   // (1 + beta k^beta) / 2
  double gamma_minus() const;  // (1 - beta k^beta) / 2
};

/// The two-step method's memory: (u^{n-1}, u^n, v^{n-1}, v^n).
struct SchemeState {
  int n = 0;
  fem::NodalVec u_prev;
  fem::NodalVec u_curr;
  fem::NodalVec v_prev;
  fem::NodalVec v_curr;
};

struct EnergyReport {
  double kinetic = 0.0;
  double elastic = 0.0;
  double total = 0.0;
};

/// Everything a run shares across steps: mass and stiffness forms, the
/// factored implicit matrix (M + gamma_+ k^2 K), and the nodal mode basis.
/// Read-only after construction; concurrent solves against one factorization
/// are permitted.
class SchemeOperators {
 public:
  SchemeOperators(const fem::Grid1D& grid, const SchemeParams& params,
                  int n_modes, noise::ModeShape shape = noise::ModeShape::kSine);

  const fem::Grid1D& grid() const noexcept { return grid_; }
  const SchemeParams& params() const noexcept { return params_; }
  const fem::TriDiag& mass() const noexcept { return mass_; }
  const fem::TriDiag& stiffness() const noexcept { return stiffness_; }
  const fem::TriDiagSolver& solver() const noexcept { return solver_; }
  const noise::ModeBasis& modes() const noexcept { return modes_; }

 private:
  fem::Grid1D grid_;
  SchemeParams params_;
  fem::TriDiag mass_;
  fem::TriDiag stiffness_;
  fem::TriDiagSolver solver_;
  noise::ModeBasis modes_;
};

/// First step: u^0 = I_h u0, v^0 = I_h v0, and
///   u^1 = u0 + k v0 + (k^2/2) lap(u0) + k^2 F(u0,v0) + (k+k^2) sigma(u0,v0) D0W
///   v^1 = (u^1 - u^0) / k
/// with lap(u0) the analytic Laplacian when the problem declares one and
/// -M^{-1} K I_h u0 otherwise. The v^1 relation keeps the two-step energy
/// identity exact from the first transition. Returns the state with n = 1.
SchemeState init_state(const model::Problem& p, const SchemeOperators& ops,
                       const noise::IncrementSet& inc);

/// One step of the integrator: solves
///   (M + g+ k^2 K) v^{n+1} = M v^n - k K (g+ u^n + g- u^{n-1}) + M I_h[g]
///   u^{n+1} = u^n + k v^{n+1}
/// with g = sigma(u^n, v^{n-1/2}) DW + alpha_hat D_u sigma(u^n, v^{n-1/2})
/// v^n DW_hat + (k/2)(3F(u^n,v^n) - F(u^{n-1},v^{n-1})) evaluated nodally.
/// Inputs are untouched; a fresh state with n+1 is returned.
/// Throws BlowUpError on non-finite or absurdly large nodal values.
SchemeState step(const SchemeState& state, const model::Problem& p,
                 const SchemeOperators& ops, const noise::IncrementSet& inc);

/// Kinetic (v^T M v / 2) and elastic (u^T K u / 2) energy of the current
/// iterates.
EnergyReport energy(const SchemeState& s, const fem::TriDiag& mass,
                    const fem::TriDiag& stiffness);

/// Two-step invariant E = v^T M v / 2 + (u_curr^T K u_curr + u_prev^T K
/// u_prev) / 4. Exactly conserved for sigma = F = 0, beta = 0, and
/// non-increasing for beta in (0, 1/2).
double conserved_two_step_energy(const SchemeState& s, const fem::TriDiag& mass,
                                 const fem::TriDiag& stiffness);

/// init_state + steps up to the horizon. The observer (optional) sees every
/// state, starting with n = 1. Returns the final state (n = horizon/k).
SchemeState simulate(const model::Problem& p, const SchemeOperators& ops,
                     const noise::IncrementSet& inc,
                     const std::function<void(const SchemeState&)>& observer = {});

}  // namespace stochwave::scheme
