#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochwave/experiments.hpp"

namespace stochwave::cli {

enum class Subcommand { kConvergence, kEnergy, kBetaSweep, kSinglePath };

/// One experiment invocation. Dyadic steps are written "2^-j" on the command
/// line and in config files so that grid nesting stays exact.
struct RunConfig {
  Subcommand subcommand = Subcommand::kConvergence;
  std::string preset = "sin-sigma";
  int alpha_hat = 1;
  double beta = 0.0;
  std::vector<double> k_list;  // convergence
  double k = 0.0;              // energy / beta-sweep
  int n_cells = 64;            // from --h 2^-j
  double k_ref = 0.0;          // convergence
  int mc = 500;
  std::vector<double> beta_list;  // beta-sweep
  std::vector<int> mc_list;       // beta-sweep
  std::uint64_t seed = 0;
  std::string out;
  experiments::ErrorTime error_time = experiments::ErrorTime::kFinal;
  double horizon = 1.0;
  int n_modes = 3;
  int fine_level = 10;  // single-path
  double roughness_threshold = 0.05;

  bool operator==(const RunConfig&) const = default;
};

/// Parses argv[1..] (subcommand first, then flags). A `--config FILE` flag
/// loads a flat `key = value` file (# comments); explicit flags override
/// config-file values. Throws ConfigError on any invalid input.
RunConfig parse_args(const std::vector<std::string>& args);

/// Flat key = value rendering; parse_args(serialize(cfg)) round-trips.
std::string serialize_config(const RunConfig& config);

/// Runs the experiment, writes the CSV atomically, prints a one-line summary
/// to stdout. Throws on failure; exit-code mapping happens in main.
void run(const RunConfig& config);

/// Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O.
int main_impl(const std::vector<std::string>& args);

std::string usage_text();

}  // namespace stochwave::cli
