#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stochwave::model {

using Pointwise2 = std::function<double(double, double)>;  // (u, v) -> real
using Pointwise1 = std::function<double(double)>;          // x -> real

/// Drift F, diffusion sigma, its u-derivative acting by multiplication, and
/// initial data. All maps are pure and reentrant; a single Problem serves
/// every Monte-Carlo thread.
struct Problem {
  std::string label;
  Pointwise2 drift;       // F(u, v)
  Pointwise2 sigma;       // sigma(u, v)
  Pointwise2 d_sigma_du;  // D_u sigma(u, v)
  Pointwise1 u0;
  Pointwise1 v0;
  /// Analytic Laplacian of u0 when available; null -> discrete fallback.
  Pointwise1 laplace_u0;
  /// False exempts sigma from the finite-difference derivative check
  /// (e.g. sigma = sqrt|u| is not differentiable at 0).
  bool sigma_differentiable = true;
};

/// Named problems from the experiment families. Throws ConfigError with the
/// list of valid names on an unknown name.
Problem preset(const std::string& name);

std::vector<std::string> preset_names();

/// Human-readable preset table for CLI help output.
std::string preset_table();

struct DerivativeReport {
  double max_rel_deviation = 0.0;  // d_sigma_du vs central differences
  bool exempt = false;
  int samples = 0;
};

/// Compares d_sigma_du against central differences of sigma at `samples`
/// random (u,v) points in [-2,2]^2. Report-only; never throws on deviation.
DerivativeReport check_derivative(const Problem& p, int samples,
                                  std::uint64_t seed);

}  // namespace stochwave::model
