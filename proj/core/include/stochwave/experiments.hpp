#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stochwave::experiments {

/// Where the strong error is measured: at the final time only, or the max
/// over all coarse step times (the theorem's formulation).
enum class ErrorTime {
  kFinal,
  kMaxOverSteps,
};

struct ConvergenceSpec {
  std::string preset;
  int alpha_hat = 1;
  double beta = 0.0;
  std::vector<double> k_list;  // dyadic, each strictly larger than k_ref
  int n_cells = 64;
  double k_ref = 0.0;
  int mc = 500;
  std::uint64_t base_seed = 0;
  ErrorTime error_time = ErrorTime::kFinal;
  double horizon = 1.0;
  int n_modes = 3;

  void validate() const;  // throws ConfigError
};

struct RateTable {
  struct Row {
    double k;
    double err_u_l2;
    double err_u_h1;
    double err_v_l2;
  };
  std::vector<Row> rows;  // sorted by decreasing k
  double slope_u_l2 = 0.0, slope_u_h1 = 0.0, slope_v_l2 = 0.0;
  double resid_u_l2 = 0.0, resid_u_h1 = 0.0, resid_v_l2 = 0.0;
  int excluded = 0;
};

/// Coupled-path strong convergence study: one fine Wiener path per sample
/// drives both the reference run at k_ref and every coarse run, on a shared
/// spatial grid. Errors are RMS over samples of discrete norms of the
/// difference. Blown-up samples are excluded and counted; more than 5%
/// exclusions throws BlowUpBudgetError. Deterministic given (spec, seed),
/// independent of worker count.
RateTable run_convergence(const ConvergenceSpec& spec);

struct EnergySpec {
  std::string preset;
  int alpha_hat = 1;
  double beta = 0.0;
  double k = 0.0;
  int n_cells = 128;
  int mc = 1000;
  std::uint64_t base_seed = 0;
  double horizon = 1.0;
  int n_modes = 3;

  void validate() const;
};

struct EnergyStudy {
  std::vector<double> t;  // 0, k, 2k, ..., T
  std::vector<double> kin_mean, ela_mean, total_mean;
  std::vector<double> kin_path, ela_path, total_path;  // sample with seed = base_seed
  /// MC mean of the two-step invariant; entry i corresponds to t = (i+1) k.
  std::vector<double> conserved_mean;
  int excluded = 0;
};

EnergyStudy run_energy_study(const EnergySpec& spec);

/// max_n |c_n - c_0| / |c_0| over the conserved_mean series.
double conserved_relative_drift(const EnergyStudy& study);

struct BetaSweepSpec {
  std::string preset = "sigma-5v";
  int alpha_hat = 1;
  std::vector<double> beta_list;  // all in [0, 1/2)
  double k = 0.0;
  int n_cells = 32;
  std::vector<int> mc_list;  // increasing sample counts
  std::uint64_t base_seed = 0;
  double horizon = 0.5;
  int n_modes = 3;
  double roughness_threshold = 0.05;

  void validate() const;
};

struct BetaSweepRow {
  double beta;
  int mc;
  double roughness;
};

struct BetaSweepTable {
  std::vector<BetaSweepRow> rows;
  /// Per beta: smallest mc in mc_list whose energy curve is steadier than the
  /// threshold; -1 when none reaches it.
  std::vector<std::pair<double, int>> min_mc;
  int excluded = 0;
};

/// Energy-curve stability sweep: for each beta and each Monte-Carlo budget,
/// the roughness of t -> E_MC[two-step energy] on the second half of [0,T],
/// measured as max_n |c_{n+1} - c_n| / c_n. Sample sets are nested across
/// mc values, so doubling mc reuses (and extends) the same trajectories.
BetaSweepTable run_beta_sweep(const BetaSweepSpec& spec);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS residual in log2 space
};

/// Least-squares line through (log2 k, log2 err). Requires >= 3 rows and
/// err > 0 everywhere (zero errors mean an exact-equality situation that a
/// rate fit cannot represent).
RateFit fit_rate(std::span<const std::pair<double, double>> rows);

/// CSV: header k,err_u_l2,err_u_h1,err_v_l2; rows with 17 significant
/// digits; trailing comment line with the fitted slopes and the exclusion
/// count. Written atomically.
void write_rate_csv(const RateTable& table, const std::filesystem::path& out);

/// CSV: t,e_kin_mean,e_ela_mean,e_total_mean,e_kin_path,e_ela_path,e_total_path.
void write_energy_csv(const EnergyStudy& study, const std::filesystem::path& out);

/// CSV: beta,mc,roughness.
void write_beta_sweep_csv(const BetaSweepTable& table,
                          const std::filesystem::path& out);

}  // namespace stochwave::experiments
