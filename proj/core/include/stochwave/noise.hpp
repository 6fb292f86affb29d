#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "stochwave/fem1d.hpp"

namespace stochwave::noise {

/// Spatial mode family of the Wiener process W(t,x) = sum_j beta_j(t) e_j(x).
enum class ModeShape {
  kSine,  // e_j(x) = sqrt(2) sin(j pi x)
};

struct NoiseConfig {
  int n_modes = 3;
  ModeShape mode_shape = ModeShape::kSine;
  int fine_level = 10;   // fine time step k_fine = 2^-fine_level
  double horizon = 1.0;  // T; T / k_fine must be an integer

  void validate() const;
};

// Brownian increments are quantized to this dyadic lattice when a path is
// sampled. Every stored path value is then an exact multiple of the quantum
// and comfortably below 2^53 quanta, so sums and differences of path values
// are exact in double arithmetic. Coarse increments computed at different
// resolutions from one path therefore couple bitwise.
inline constexpr double kPathQuantum = 0x1p-32;

/// M independent discrete Brownian trajectories on the fine dyadic grid.
/// Immutable after construction and safe to share across threads.
class WienerPath {
 public:
  WienerPath(NoiseConfig config, std::uint64_t seed,
             std::vector<std::vector<double>> beta);

  const NoiseConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double k_fine() const noexcept { return k_fine_; }
  /// Number of fine steps; each mode stores n_fine_steps()+1 values.
  int n_fine_steps() const noexcept { return n_fine_steps_; }
  std::span<const double> mode(int j) const { return beta_[j]; }
  double value(int j, int i) const { return beta_[j][i]; }

 private:
  NoiseConfig config_;
  std::uint64_t seed_;
  double k_fine_;
  int n_fine_steps_;
  std::vector<std::vector<double>> beta_;
};

/// Samples M Brownian paths at resolution 2^-fine_level. Deterministic given
/// (config, seed).
WienerPath sample_path(const NoiseConfig& config, std::uint64_t seed);

/// Stream seed for Monte-Carlo sample m: base_seed XOR (m * odd constant).
/// Fixed so that reruns reproduce tables exactly.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t sample_index);

/// Per coarse step n and mode j: the plain increment dw, the implementable
/// Ito-weighted increment dw_hat built from substeps of size k^2, and its
/// fine-grid reference dw_tilde. Layout is [step][mode].
class IncrementSet {
 public:
  IncrementSet(double k, int n_modes, int n_steps);

  double k() const noexcept { return k_; }
  int n_modes() const noexcept { return n_modes_; }
  int n_steps() const noexcept { return n_steps_; }

  std::span<const double> dw(int n) const { return row(dw_, n); }
  std::span<const double> dw_hat(int n) const { return row(dw_hat_, n); }
  std::span<const double> dw_tilde(int n) const { return row(dw_tilde_, n); }

  std::span<double> dw(int n) { return row(dw_, n); }
  std::span<double> dw_hat(int n) { return row(dw_hat_, n); }
  std::span<double> dw_tilde(int n) { return row(dw_tilde_, n); }

 private:
  std::span<const double> row(const std::vector<double>& v, int n) const {
    return {v.data() + static_cast<std::size_t>(n) * n_modes_,
            static_cast<std::size_t>(n_modes_)};
  }
  std::span<double> row(std::vector<double>& v, int n) {
    return {v.data() + static_cast<std::size_t>(n) * n_modes_,
            static_cast<std::size_t>(n_modes_)};
  }

  double k_;
  int n_modes_;
  int n_steps_;
  std::vector<double> dw_, dw_hat_, dw_tilde_;
};

/// Builds the coarse increments at dyadic step k:
///   dw[n][j]       = beta_j(t_{n+1}) - beta_j(t_n)
///   dw_hat[n][j]   = k beta_j(t_{n+1}) - k^2 sum_{l=1..1/k} beta_j(t_n + l k^2)
///   dw_tilde[n][j] = k beta_j(t_{n+1}) - k_fine * sum over fine nodes in
///                    (t_n, t_{n+1}] of beta_j
/// Requires k | T and k_fine | k^2; otherwise throws ResolutionError.
IncrementSet coarse_increments(const WienerPath& path, double k);

/// Nodal values of sum_j coeffs[j] * e_j(x_i).
fem::NodalVec eval_noise_field(std::span<const double> coeffs,
                               const fem::Grid1D& grid,
                               ModeShape shape = ModeShape::kSine);

/// Mode values cached per grid for repeated field evaluation in the stepper.
class ModeBasis {
 public:
  ModeBasis(int n_modes, const fem::Grid1D& grid,
            ModeShape shape = ModeShape::kSine);

  int n_modes() const noexcept { return n_modes_; }
  int n_nodes() const noexcept { return n_nodes_; }
  /// out[i] = sum_j coeffs[j] * e_j(x_i).
  void combine(std::span<const double> coeffs, std::span<double> out) const;

 private:
  int n_modes_;
  int n_nodes_;
  std::vector<double> values_;  // [mode][node]
};

/// Path dump: CSV `t,beta_1,...,beta_M`, one row per fine grid time,
/// 17 significant digits, written atomically.
void write_path_csv(const WienerPath& path, const std::filesystem::path& out);

}  // namespace stochwave::noise
