#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stochwave/csv_io.hpp"
#include "stochwave/dyadic.hpp"
#include "stochwave/errors.hpp"
#include "stochwave/model.hpp"
#include "stochwave/noise.hpp"

namespace stochwave::cli {

namespace {

const char* subcommand_name(Subcommand sub) {
  switch (sub) {
    case Subcommand::kConvergence: return "convergence";
    case Subcommand::kEnergy: return "energy";
    case Subcommand::kBetaSweep: return "beta-sweep";
    case Subcommand::kSinglePath: return "single-path";
  }
  return "?";
}

Subcommand subcommand_from_name(const std::string& name) {
  if (name == "convergence") return Subcommand::kConvergence;
  if (name == "energy") return Subcommand::kEnergy;
  if (name == "beta-sweep") return Subcommand::kBetaSweep;
  if (name == "single-path") return Subcommand::kSinglePath;
  throw ConfigError("unknown subcommand '" + name +
                    "' (expected convergence, energy, beta-sweep, single-path)");
}

double parse_dyadic_or_throw(const std::string& text, const std::string& flag) {
  auto v = parse_dyadic(text);
  if (!v) {
    throw ConfigError(flag + ": '" + text + "' is not a dyadic step literal 2^-j");
  }
  return *v;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) parts.push_back(item);
  return parts;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += parts[i];
  }
  return s;
}

// Flat key = value file with # comments. Returned in file order as --key=value
// tokens, injected ahead of the explicit flags so those win.
std::vector<std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::vector<std::string> args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

struct RawOptions {
  std::string k_list, k, h, k_ref, error_time;
  std::string beta_list, mc_list;
};

void add_options(CLI::App& app, Subcommand sub, RunConfig& cfg, RawOptions& raw) {
  auto last = [](CLI::Option* o) {
    o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return o;
  };
  bool wants_preset = sub != Subcommand::kSinglePath;
  bool wants_scheme = sub != Subcommand::kSinglePath;
  if (wants_preset) {
    last(app.add_option("--preset", cfg.preset, "Problem preset name"));
  }
  if (wants_scheme) {
    last(app.add_option("--alpha-hat", cfg.alpha_hat,
                        "Ito-correction toggle (0 or 1)"));
    last(app.add_option("--h", raw.h, "Mesh size as 2^-j (n_cells = 2^j)"));
    last(app.add_option("--mc", cfg.mc, "Monte-Carlo sample count"));
    last(app.add_option("--modes", cfg.n_modes, "Number of Wiener modes"));
  }
  if (sub == Subcommand::kConvergence || sub == Subcommand::kEnergy) {
    last(app.add_option("--beta", cfg.beta, "Dissipation exponent in [0, 1/2)"));
  }
  if (sub == Subcommand::kConvergence) {
    last(app.add_option("--k-list", raw.k_list, "Comma list of dyadic steps 2^-j"));
    last(app.add_option("--k-ref", raw.k_ref, "Reference step 2^-j"));
    last(app.add_option("--error-time", raw.error_time,
                        "Error sampling: final or max"));
  }
  if (sub == Subcommand::kEnergy || sub == Subcommand::kBetaSweep) {
    last(app.add_option("--k", raw.k, "Time step 2^-j"));
  }
  if (sub == Subcommand::kBetaSweep) {
    last(app.add_option("--beta-list", raw.beta_list, "Comma list of beta values"));
    last(app.add_option("--mc-list", raw.mc_list, "Comma list of sample counts"));
    last(app.add_option("--roughness-threshold", cfg.roughness_threshold,
                        "Steady-energy roughness threshold"));
  }
  if (sub == Subcommand::kSinglePath) {
    last(app.add_option("--modes", cfg.n_modes, "Number of Wiener modes"));
    last(app.add_option("--fine-level", cfg.fine_level,
                        "Fine grid level L (k_fine = 2^-L)"));
  }
  last(app.add_option("--T", cfg.horizon, "Time horizon"));
  last(app.add_option("--seed", cfg.seed, "Base RNG seed"));
  last(app.add_option("--out", cfg.out, "Output CSV path"));
}

void finalize(RunConfig& cfg, const RawOptions& raw) {
  if (!raw.h.empty()) {
    double h = parse_dyadic_or_throw(raw.h, "--h");
    cfg.n_cells = static_cast<int>(std::floor(1.0 / h + 0.5));
  }
  if (!raw.k.empty()) cfg.k = parse_dyadic_or_throw(raw.k, "--k");
  if (!raw.k_ref.empty()) cfg.k_ref = parse_dyadic_or_throw(raw.k_ref, "--k-ref");
  if (!raw.k_list.empty()) {
    cfg.k_list.clear();
    for (const auto& tok : split_commas(raw.k_list)) {
      cfg.k_list.push_back(parse_dyadic_or_throw(tok, "--k-list"));
    }
  }
  if (!raw.error_time.empty()) {
    if (raw.error_time == "final") {
      cfg.error_time = experiments::ErrorTime::kFinal;
    } else if (raw.error_time == "max") {
      cfg.error_time = experiments::ErrorTime::kMaxOverSteps;
    } else {
      throw ConfigError("--error-time: expected 'final' or 'max', got '" +
                        raw.error_time + "'");
    }
  }
  if (!raw.beta_list.empty()) {
    cfg.beta_list.clear();
    for (const auto& tok : split_commas(raw.beta_list)) {
      try {
        cfg.beta_list.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("--beta-list: bad value '" + tok + "'");
      }
    }
  }
  if (!raw.mc_list.empty()) {
    cfg.mc_list.clear();
    for (const auto& tok : split_commas(raw.mc_list)) {
      try {
        cfg.mc_list.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ConfigError("--mc-list: bad value '" + tok + "'");
      }
    }
  }
  if (cfg.alpha_hat != 0 && cfg.alpha_hat != 1) {
    throw ConfigError("--alpha-hat must be 0 or 1");
  }
  if (!(cfg.beta >= 0.0) || cfg.beta >= 0.5) {
    throw ConfigError("--beta must lie in [0, 1/2)");
  }
  for (double b : cfg.beta_list) {
    if (!(b >= 0.0) || b >= 0.5) {
      throw ConfigError("--beta-list values must lie in [0, 1/2)");
    }
  }
  if (cfg.out.empty()) {
    switch (cfg.subcommand) {
      case Subcommand::kConvergence: cfg.out = "rates.csv"; break;
      case Subcommand::kEnergy: cfg.out = "energy.csv"; break;
      case Subcommand::kBetaSweep: cfg.out = "beta_sweep.csv"; break;
      case Subcommand::kSinglePath: cfg.out = "path.csv"; break;
    }
  }
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  // pull out --config first; its entries become defaults
  std::vector<std::string> rest;
  std::vector<std::string> config_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
      config_args = load_config_file(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_args = load_config_file(args[i].substr(9));
    } else {
      rest.push_back(args[i]);
    }
  }

  std::string sub_name;
  if (!rest.empty() && !rest.front().empty() && rest.front()[0] != '-') {
    sub_name = rest.front();
    rest.erase(rest.begin());
  }
  // config may carry the subcommand when none is given explicitly
  std::vector<std::string> injected;
  for (const auto& arg : config_args) {
    if (arg.rfind("--subcommand=", 0) == 0) {
      if (sub_name.empty()) sub_name = arg.substr(13);
    } else {
      injected.push_back(arg);
    }
  }
  if (sub_name.empty()) {
    throw ConfigError("missing subcommand\n" + usage_text());
  }

  RunConfig cfg;
  cfg.subcommand = subcommand_from_name(sub_name);
  RawOptions raw;

  CLI::App app{"stochwave " + sub_name};
  app.set_help_flag();  // usage_text() replaces CLI11 help; frees up --h
  add_options(app, cfg.subcommand, cfg, raw);

  std::vector<std::string> all = injected;
  all.insert(all.end(), rest.begin(), rest.end());
  // CLI11 parses reversed argv
  std::vector<std::string> reversed(all.rbegin(), all.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("usage error: ") + e.what());
  }
  finalize(cfg, raw);
  return cfg;
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream os;
  os << "# stochwave run configuration\n";
  os << "subcommand = " << subcommand_name(config.subcommand) << "\n";
  if (config.subcommand != Subcommand::kSinglePath) {
    os << "preset = " << config.preset << "\n";
    os << "alpha-hat = " << config.alpha_hat << "\n";
    os << "h = 2^-" << dyadic_level(1.0 / config.n_cells) << "\n";
    os << "mc = " << config.mc << "\n";
    os << "modes = " << config.n_modes << "\n";
  }
  if (config.subcommand == Subcommand::kConvergence ||
      config.subcommand == Subcommand::kEnergy) {
    os << "beta = " << format_g17(config.beta) << "\n";
  }
  if (config.subcommand == Subcommand::kConvergence) {
    std::vector<std::string> ks;
    for (double k : config.k_list) ks.push_back(format_dyadic(k));
    os << "k-list = " << join(ks) << "\n";
    os << "k-ref = " << format_dyadic(config.k_ref) << "\n";
    os << "error-time = "
       << (config.error_time == experiments::ErrorTime::kFinal ? "final" : "max")
       << "\n";
  }
  if (config.subcommand == Subcommand::kEnergy ||
      config.subcommand == Subcommand::kBetaSweep) {
    os << "k = " << format_dyadic(config.k) << "\n";
  }
  if (config.subcommand == Subcommand::kBetaSweep) {
    std::vector<std::string> bs;
    for (double b : config.beta_list) bs.push_back(format_g17(b));
    os << "beta-list = " << join(bs) << "\n";
    std::vector<std::string> ms;
    for (int m : config.mc_list) ms.push_back(std::to_string(m));
    os << "mc-list = " << join(ms) << "\n";
    os << "roughness-threshold = " << format_g17(config.roughness_threshold)
       << "\n";
  }
  if (config.subcommand == Subcommand::kSinglePath) {
    os << "modes = " << config.n_modes << "\n";
    os << "fine-level = " << config.fine_level << "\n";
  }
  os << "T = " << format_g17(config.horizon) << "\n";
  os << "seed = " << config.seed << "\n";
  os << "out = " << config.out << "\n";
  return os.str();
}

void run(const RunConfig& config) {
  switch (config.subcommand) {
    case Subcommand::kConvergence: {
      experiments::ConvergenceSpec spec;
      spec.preset = config.preset;
      spec.alpha_hat = config.alpha_hat;
      spec.beta = config.beta;
      spec.k_list = config.k_list;
      spec.n_cells = config.n_cells;
      spec.k_ref = config.k_ref;
      spec.mc = config.mc;
      spec.base_seed = config.seed;
      spec.error_time = config.error_time;
      spec.horizon = config.horizon;
      spec.n_modes = config.n_modes;
      experiments::RateTable table = experiments::run_convergence(spec);
      experiments::write_rate_csv(table, config.out);
      std::cout << "convergence preset=" << config.preset
                << " slope_u_l2=" << format_g17(table.slope_u_l2)
                << " slope_u_h1=" << format_g17(table.slope_u_h1)
                << " slope_v_l2=" << format_g17(table.slope_v_l2)
                << " excluded=" << table.excluded << " out=" << config.out
                << "\n";
      return;
    }
    case Subcommand::kEnergy: {
      experiments::EnergySpec spec;
      spec.preset = config.preset;
      spec.alpha_hat = config.alpha_hat;
      spec.beta = config.beta;
      spec.k = config.k;
      spec.n_cells = config.n_cells;
      spec.mc = config.mc;
      spec.base_seed = config.seed;
      spec.horizon = config.horizon;
      spec.n_modes = config.n_modes;
      experiments::EnergyStudy study = experiments::run_energy_study(spec);
      experiments::write_energy_csv(study, config.out);
      double drift = experiments::conserved_relative_drift(study);
      double at_t1 = study.total_mean.size() > 1 ? study.total_mean[1] : 0.0;
      double at_T = study.total_mean.back();
      double change = at_t1 != 0.0 ? std::abs(at_T - at_t1) / std::abs(at_t1) : 0.0;
      std::cout << "energy preset=" << config.preset
                << " energy_drift=" << format_g17(drift)
                << " total_change=" << format_g17(change)
                << " excluded=" << study.excluded << " out=" << config.out << "\n";
      return;
    }
    case Subcommand::kBetaSweep: {
      experiments::BetaSweepSpec spec;
      spec.preset = config.preset;
      spec.alpha_hat = config.alpha_hat;
      spec.beta_list = config.beta_list;
      spec.k = config.k;
      spec.n_cells = config.n_cells;
      spec.mc_list = config.mc_list;
      spec.base_seed = config.seed;
      spec.horizon = config.horizon;
      spec.n_modes = config.n_modes;
      spec.roughness_threshold = config.roughness_threshold;
      experiments::BetaSweepTable table = experiments::run_beta_sweep(spec);
      experiments::write_beta_sweep_csv(table, config.out);
      std::ostringstream os;
      os << "beta-sweep preset=" << config.preset;
      for (const auto& [beta, mc] : table.min_mc) {
        os << " min_mc[beta=" << format_g17(beta) << "]=" << mc;
      }
      os << " excluded=" << table.excluded << " out=" << config.out;
      std::cout << os.str() << "\n";
      return;
    }
    case Subcommand::kSinglePath: {
      noise::NoiseConfig ncfg;
      ncfg.n_modes = config.n_modes;
      ncfg.fine_level = config.fine_level;
      ncfg.horizon = config.horizon;
      noise::WienerPath path = noise::sample_path(ncfg, config.seed);
      noise::write_path_csv(path, config.out);
      std::cout << "single-path modes=" << config.n_modes
                << " fine_level=" << config.fine_level
                << " rows=" << (path.n_fine_steps() + 1) << " out=" << config.out
                << "\n";
      return;
    }
  }
}

std::string usage_text() {
  std::ostringstream os;
  os << "usage: stochwave <subcommand> [flags]\n"
     << "subcommands:\n"
     << "  convergence   coupled-path strong convergence table (rates CSV)\n"
     << "  energy        Monte-Carlo energy trajectories (energy CSV)\n"
     << "  beta-sweep    energy-curve steadiness vs beta and sample count\n"
     << "  single-path   dump one Wiener path (t,beta_1,...,beta_M CSV)\n"
     << "common flags: --preset --alpha-hat --beta --h 2^-j --mc --seed --out\n"
     << "              --T --modes --config FILE (flat key = value)\n"
     << "convergence:  --k-list 2^-3,2^-4,... --k-ref 2^-j --error-time final|max\n"
     << "energy:       --k 2^-j\n"
     << "beta-sweep:   --k 2^-j --beta-list 0,0.25,... --mc-list 100,200,...\n"
     << "single-path:  --fine-level L\n"
     << "env:          STOCHWAVE_THREADS caps the worker pool\n\n"
     << model::preset_table();
  return os.str();
}

int main_impl(const std::vector<std::string>& args) {
  if (args.empty() || args[0] == "--help" || args[0] == "-h" ||
      args[0] == "help") {
    std::cout << usage_text();
    return args.empty() ? 2 : 0;
  }
  try {
    RunConfig config = parse_args(args);
    run(config);
    return 0;
  } catch (const IoError& e) {
    std::cerr << "stochwave: I/O error: " << e.what() << "\n";
    return 4;
  } catch (const BlowUpBudgetError& e) {
    std::cerr << "stochwave: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const BlowUpError& e) {
    std::cerr << "stochwave: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "stochwave: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "stochwave: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace stochwave::cli
