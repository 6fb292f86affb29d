#include "stochwave/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "stochwave/csv_io.hpp"
#include "stochwave/dyadic.hpp"
#include "stochwave/errors.hpp"

namespace stochwave::noise {

namespace {

// Number of fine steps T / 2^-L; throws unless it is a positive integer.
int fine_step_count(double horizon, int fine_level) {
  double steps = std::ldexp(horizon, fine_level);
  if (!(steps >= 1.0) || steps != std::floor(steps) || steps > 1e9) {
    throw ConfigError("horizon " + std::to_string(horizon) +
                      " is not an integer multiple of the fine step 2^-" +
                      std::to_string(fine_level));
  }
  return static_cast<int>(steps);
}

double mode_value(ModeShape shape, int j, double x) {
  switch (shape) {
    case ModeShape::kSine:
      return std::numbers::sqrt2 * std::sin((j + 1) * std::numbers::pi * x);
  }
  throw ConfigError("unknown mode shape");
}

}  // namespace

void NoiseConfig::validate() const {
  if (n_modes < 1) {
    throw ConfigError("n_modes must be >= 1, got " + std::to_string(n_modes));
  }
  if (fine_level < 1 || fine_level > 30) {
    throw ConfigError("fine_level must be in [1, 30], got " +
                      std::to_string(fine_level));
  }
  if (!(horizon > 0.0)) {
    throw ConfigError("horizon must be positive");
  }
  fine_step_count(horizon, fine_level);
}

WienerPath::WienerPath(NoiseConfig config, std::uint64_t seed,
                       std::vector<std::vector<double>> beta)
    : config_(config),
      seed_(seed),
      k_fine_(dyadic_value(config.fine_level)),
      n_fine_steps_(fine_step_count(config.horizon, config.fine_level)),
      beta_(std::move(beta)) {
  if (static_cast<int>(beta_.size()) != config_.n_modes) {
    throw DimensionError("WienerPath: expected " + std::to_string(config_.n_modes) +
                         " mode trajectories, got " + std::to_string(beta_.size()));
  }
  for (const auto& b : beta_) {
    if (static_cast<int>(b.size()) != n_fine_steps_ + 1) {
      throw DimensionError("WienerPath: mode trajectory length mismatch");
    }
  }
}

WienerPath sample_path(const NoiseConfig& config, std::uint64_t seed) {
  config.validate();
  int n = fine_step_count(config.horizon, config.fine_level);
  double k_fine = dyadic_value(config.fine_level);
  double stddev = std::sqrt(k_fine);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::vector<double>> beta(config.n_modes);
  for (auto& b : beta) {
    b.resize(n + 1);
    b[0] = 0.0;
    for (int i = 0; i < n; ++i) {
      double inc = std::round(stddev * normal(rng) / kPathQuantum) * kPathQuantum;
      b[i + 1] = b[i] + inc;
    }
  }
  return WienerPath(config, seed, std::move(beta));
}

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t sample_index) {
  return base_seed ^ (sample_index * 0x9E3779B97F4A7C15ull);
}

IncrementSet::IncrementSet(double k, int n_modes, int n_steps)
    : k_(k), n_modes_(n_modes), n_steps_(n_steps) {
  std::size_t total = static_cast<std::size_t>(n_modes) * n_steps;
  dw_.assign(total, 0.0);
  dw_hat_.assign(total, 0.0);
  dw_tilde_.assign(total, 0.0);
}

IncrementSet coarse_increments(const WienerPath& path, double k) {
  int level_k = dyadic_level(k);
  int level_fine = path.config().fine_level;
  double k_fine = path.k_fine();

  if (2 * level_k > level_fine) {
    throw ResolutionError(
        "coarse step 2^-" + std::to_string(level_k) + " needs substeps of size 2^-" +
        std::to_string(2 * level_k) + " but the path is sampled at 2^-" +
        std::to_string(level_fine) + "; use fine_level >= " +
        std::to_string(2 * level_k));
  }

  double steps = path.config().horizon / k;
  if (steps != std::floor(steps) || steps < 1.0) {
    throw ConfigError("coarse step " + format_dyadic(k) +
                      " does not divide the horizon");
  }
  int n_steps = static_cast<int>(steps);

  int window = 1 << (level_fine - level_k);       // fine nodes per coarse step
  int stride = 1 << (level_fine - 2 * level_k);   // fine nodes per k^2 substep
  int substeps = 1 << level_k;                    // 1/k substeps per coarse step
  double k_sq = k * k;

  IncrementSet inc(k, path.config().n_modes, n_steps);
  for (int j = 0; j < path.config().n_modes; ++j) {
    std::span<const double> b = path.mode(j);
    for (int n = 0; n < n_steps; ++n) {
      int a = n * window;
      double w_end = b[a + window];

      inc.dw(n)[j] = w_end - b[a];

      double sub_sum = 0.0;
      for (int l = 1; l <= substeps; ++l) sub_sum += b[a + l * stride];
      inc.dw_hat(n)[j] = k * w_end - k_sq * sub_sum;

      double fine_sum = 0.0;
      for (int i = a + 1; i <= a + window; ++i) fine_sum += b[i];
      inc.dw_tilde(n)[j] = k * w_end - k_fine * fine_sum;
    }
  }
  return inc;
}

fem::NodalVec eval_noise_field(std::span<const double> coeffs,
                               const fem::Grid1D& grid, ModeShape shape) {
  fem::NodalVec values(grid.n_interior(), 0.0);
  for (int i = 0; i < grid.n_interior(); ++i) {
    double x = grid.node(i);
    double s = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      s += coeffs[j] * mode_value(shape, static_cast<int>(j), x);
    }
    values[i] = s;
  }
  return values;
}

ModeBasis::ModeBasis(int n_modes, const fem::Grid1D& grid, ModeShape shape)
    : n_modes_(n_modes), n_nodes_(grid.n_interior()) {
  values_.resize(static_cast<std::size_t>(n_modes_) * n_nodes_);
  for (int j = 0; j < n_modes_; ++j) {
    for (int i = 0; i < n_nodes_; ++i) {
      values_[static_cast<std::size_t>(j) * n_nodes_ + i] =
          mode_value(shape, j, grid.node(i));
    }
  }
}

void ModeBasis::combine(std::span<const double> coeffs,
                        std::span<double> out) const {
  if (coeffs.size() != static_cast<std::size_t>(n_modes_) ||
      out.size() != static_cast<std::size_t>(n_nodes_)) {
    throw DimensionError("ModeBasis::combine: size mismatch");
  }
  for (int i = 0; i < n_nodes_; ++i) out[i] = 0.0;
  for (int j = 0; j < n_modes_; ++j) {
    const double c = coeffs[j];
    const double* row = values_.data() + static_cast<std::size_t>(j) * n_nodes_;
    for (int i = 0; i < n_nodes_; ++i) out[i] += c * row[i];
  }
}

void write_path_csv(const WienerPath& path, const std::filesystem::path& out) {
  std::ostringstream os;
  os << "t";
  for (int j = 1; j <= path.config().n_modes; ++j) os << ",beta_" << j;
  os << "\n";
  for (int i = 0; i <= path.n_fine_steps(); ++i) {
    os << format_g17(i * path.k_fine());
    for (int j = 0; j < path.config().n_modes; ++j) {
      os << "," << format_g17(path.value(j, i));
    }
    os << "\n";
  }
  write_file_atomic(out, os.str());
}

}  // namespace stochwave::noise
