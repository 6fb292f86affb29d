#include "stochwave/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "stochwave/csv_io.hpp"
#include "stochwave/dyadic.hpp"
#include "stochwave/errors.hpp"
#include "stochwave/parallel.hpp"
#include "stochwave/scheme.hpp"

namespace stochwave::experiments {

namespace {

int steps_in_horizon(double horizon, double k) {
  double steps = horizon / k;
  if (!(steps >= 1.0) || steps != std::floor(steps)) {
    throw ConfigError("horizon must be an integer multiple of " + format_dyadic(k));
  }
  return static_cast<int>(steps);
}

void check_blow_up_budget(int excluded, int mc) {
  if (20 * excluded > mc) {  // budget: 5% of samples
    throw BlowUpBudgetError(excluded, mc);
  }
}

double safe_sqrt(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

}  // namespace

void ConvergenceSpec::validate() const {
  model::preset(preset);  // throws on unknown name
  if (alpha_hat != 0 && alpha_hat != 1) throw ConfigError("alpha_hat must be 0 or 1");
  if (!(beta >= 0.0) || beta >= 0.5) throw ConfigError("beta must lie in [0, 1/2)");
  if (n_cells < 2) throw ConfigError("n_cells must be >= 2");
  if (mc < 1) throw ConfigError("mc must be >= 1");
  if (n_modes < 1) throw ConfigError("n_modes must be >= 1");
  if (k_list.size() < 3) {
    throw ConfigError("k_list needs at least 3 steps to fit a rate");
  }
  int ref_level = dyadic_level(k_ref);
  steps_in_horizon(horizon, k_ref);
  for (double k : k_list) {
    dyadic_level(k);
    steps_in_horizon(horizon, k);
    if (!(k > k_ref)) {
      throw ConfigError("every k in k_list must be strictly larger than k_ref");
    }
  }
  std::vector<double> sorted = k_list;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("k_list contains duplicate steps");
  }
  (void)ref_level;
}

RateTable run_convergence(const ConvergenceSpec& spec) {
  spec.validate();
  const model::Problem problem = model::preset(spec.preset);
  const fem::Grid1D grid(spec.n_cells);

  std::vector<double> ks = spec.k_list;
  std::sort(ks.begin(), ks.end(), std::greater<>());
  const double k_cmp = ks.back();  // smallest coarse step; comparison grid
  const int n_cmp = steps_in_horizon(spec.horizon, k_cmp);

  // One fine path serves the reference run and every coarse run; the
  // reference's Ito increments need substeps of size k_ref^2.
  noise::NoiseConfig ncfg;
  ncfg.n_modes = spec.n_modes;
  ncfg.fine_level = 2 * dyadic_level(spec.k_ref);
  ncfg.horizon = spec.horizon;

  scheme::SchemeParams ref_params{spec.alpha_hat, spec.beta, spec.k_ref,
                                  spec.horizon};
  const scheme::SchemeOperators ref_ops(grid, ref_params, spec.n_modes);
  std::vector<scheme::SchemeOperators> k_ops;
  k_ops.reserve(ks.size());
  for (double k : ks) {
    k_ops.emplace_back(grid, scheme::SchemeParams{spec.alpha_hat, spec.beta, k,
                                                  spec.horizon},
                       spec.n_modes);
  }

  const fem::TriDiag& mass = ref_ops.mass();
  const fem::TriDiag& stiff = ref_ops.stiffness();
  const int n_nodes = grid.n_interior();
  const int ref_per_cmp = static_cast<int>(std::floor(k_cmp / spec.k_ref + 0.5));

  // Per sample, per k, per coarse step: squared norms of the coupled
  // difference (u - u_ref in mass and stiffness forms, v - v_ref in mass).
  struct SampleResult {
    bool ok = false;
    std::vector<std::vector<std::array<double, 3>>> per_k;
  };
  std::vector<SampleResult> results(spec.mc);

  parallel_for(spec.mc, [&](int m) {
    SampleResult& res = results[m];
    try {
      const noise::WienerPath path =
          noise::sample_path(ncfg, noise::stream_seed(spec.base_seed, m));
      const noise::IncrementSet inc_ref = noise::coarse_increments(path, spec.k_ref);

      std::vector<fem::NodalVec> ref_u(n_cmp), ref_v(n_cmp);
      scheme::simulate(problem, ref_ops, inc_ref,
                       [&](const scheme::SchemeState& s) {
                         if (s.n % ref_per_cmp == 0) {
                           int idx = s.n / ref_per_cmp - 1;
                           ref_u[idx] = s.u_curr;
                           ref_v[idx] = s.v_curr;
                         }
                       });

      res.per_k.resize(ks.size());
      fem::NodalVec du(n_nodes), dv(n_nodes);
      for (std::size_t ik = 0; ik < ks.size(); ++ik) {
        const double k = ks[ik];
        const noise::IncrementSet inc = noise::coarse_increments(path, k);
        const int cmp_per_step = static_cast<int>(std::floor(k / k_cmp + 0.5));
        auto& rows = res.per_k[ik];
        rows.resize(steps_in_horizon(spec.horizon, k));
        scheme::simulate(problem, k_ops[ik], inc,
                         [&](const scheme::SchemeState& s) {
                           int idx = s.n * cmp_per_step - 1;
                           for (int i = 0; i < n_nodes; ++i) {
                             du[i] = s.u_curr[i] - ref_u[idx][i];
                             dv[i] = s.v_curr[i] - ref_v[idx][i];
                           }
                           rows[s.n - 1] = {fem::quad_form(mass, du),
                                            fem::quad_form(stiff, du),
                                            fem::quad_form(mass, dv)};
                         });
      }
      res.ok = true;
    } catch (const BlowUpError&) {
      res.ok = false;
      res.per_k.clear();
    }
  });

  int excluded = 0;
  for (const auto& res : results) {
    if (!res.ok) ++excluded;
  }
  check_blow_up_budget(excluded, spec.mc);
  const int used = spec.mc - excluded;

  RateTable table;
  table.excluded = excluded;
  for (std::size_t ik = 0; ik < ks.size(); ++ik) {
    const int n_steps = steps_in_horizon(spec.horizon, ks[ik]);
    std::vector<std::array<NeumaierSum, 3>> acc(n_steps);
    for (const auto& res : results) {  // sample-index order: deterministic
      if (!res.ok) continue;
      for (int s = 0; s < n_steps; ++s) {
        for (int c = 0; c < 3; ++c) acc[s][c].add(res.per_k[ik][s][c]);
      }
    }
    std::array<double, 3> chosen{};
    if (spec.error_time == ErrorTime::kFinal) {
      for (int c = 0; c < 3; ++c) chosen[c] = acc[n_steps - 1][c].value() / used;
    } else {
      for (int s = 0; s < n_steps; ++s) {
        for (int c = 0; c < 3; ++c) {
          chosen[c] = std::max(chosen[c], acc[s][c].value() / used);
        }
      }
    }
    table.rows.push_back({ks[ik], safe_sqrt(chosen[0]), safe_sqrt(chosen[1]),
                          safe_sqrt(chosen[2])});
  }

  auto fit_column = [&](auto member) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : table.rows) pts.emplace_back(row.k, row.*member);
    return fit_rate(pts);
  };
  RateFit fu = fit_column(&RateTable::Row::err_u_l2);
  RateFit fg = fit_column(&RateTable::Row::err_u_h1);
  RateFit fv = fit_column(&RateTable::Row::err_v_l2);
  table.slope_u_l2 = fu.slope;
  table.slope_u_h1 = fg.slope;
  table.slope_v_l2 = fv.slope;
  table.resid_u_l2 = fu.residual;
  table.resid_u_h1 = fg.residual;
  table.resid_v_l2 = fv.residual;
  return table;
}

void EnergySpec::validate() const {
  model::preset(preset);
  if (alpha_hat != 0 && alpha_hat != 1) throw ConfigError("alpha_hat must be 0 or 1");
  if (!(beta >= 0.0) || beta >= 0.5) throw ConfigError("beta must lie in [0, 1/2)");
  if (n_cells < 2) throw ConfigError("n_cells must be >= 2");
  if (mc < 1) throw ConfigError("mc must be >= 1");
  if (n_modes < 1) throw ConfigError("n_modes must be >= 1");
  dyadic_level(k);
  steps_in_horizon(horizon, k);
}

EnergyStudy run_energy_study(const EnergySpec& spec) {
  spec.validate();
  const model::Problem problem = model::preset(spec.preset);
  const fem::Grid1D grid(spec.n_cells);
  const scheme::SchemeParams params{spec.alpha_hat, spec.beta, spec.k,
                                    spec.horizon};
  const scheme::SchemeOperators ops(grid, params, spec.n_modes);
  const int n_steps = params.n_steps();

  noise::NoiseConfig ncfg;
  ncfg.n_modes = spec.n_modes;
  ncfg.fine_level = 2 * dyadic_level(spec.k);
  ncfg.horizon = spec.horizon;

  struct SampleSeries {
    bool ok = false;
    std::vector<double> kin, ela, conserved;
  };
  std::vector<SampleSeries> results(spec.mc);

  parallel_for(spec.mc, [&](int m) {
    SampleSeries& res = results[m];
    try {
      const noise::WienerPath path =
          noise::sample_path(ncfg, noise::stream_seed(spec.base_seed, m));
      const noise::IncrementSet inc = noise::coarse_increments(path, spec.k);
      res.kin.resize(n_steps);
      res.ela.resize(n_steps);
      res.conserved.resize(n_steps);
      scheme::simulate(problem, ops, inc, [&](const scheme::SchemeState& s) {
        scheme::EnergyReport e = scheme::energy(s, ops.mass(), ops.stiffness());
        res.kin[s.n - 1] = e.kinetic;
        res.ela[s.n - 1] = e.elastic;
        res.conserved[s.n - 1] =
            scheme::conserved_two_step_energy(s, ops.mass(), ops.stiffness());
      });
      res.ok = true;
    } catch (const BlowUpError&) {
      res.ok = false;
      res.kin.clear();
      res.ela.clear();
      res.conserved.clear();
    }
  });

  int excluded = 0;
  for (const auto& res : results) {
    if (!res.ok) ++excluded;
  }
  check_blow_up_budget(excluded, spec.mc);
  const int used = spec.mc - excluded;

  EnergyStudy study;
  study.excluded = excluded;
  study.t.resize(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) study.t[i] = i * spec.k;

  // t = 0 row: energies of the interpolated initial data, common to all samples
  fem::NodalVec u0h = fem::interpolate(problem.u0, grid);
  fem::NodalVec v0h = fem::interpolate(problem.v0, grid);
  double kin0 = 0.5 * fem::quad_form(ops.mass(), v0h);
  double ela0 = 0.5 * fem::quad_form(ops.stiffness(), u0h);

  study.kin_mean.assign(n_steps + 1, kin0);
  study.ela_mean.assign(n_steps + 1, ela0);
  study.total_mean.assign(n_steps + 1, kin0 + ela0);
  study.conserved_mean.assign(n_steps, 0.0);

  for (int s = 0; s < n_steps; ++s) {
    NeumaierSum kin, ela, conserved;
    for (const auto& res : results) {
      if (!res.ok) continue;
      kin.add(res.kin[s]);
      ela.add(res.ela[s]);
      conserved.add(res.conserved[s]);
    }
    study.kin_mean[s + 1] = kin.value() / used;
    study.ela_mean[s + 1] = ela.value() / used;
    study.total_mean[s + 1] = study.kin_mean[s + 1] + study.ela_mean[s + 1];
    study.conserved_mean[s] = conserved.value() / used;
  }

  const double nan = std::nan("");
  study.kin_path.assign(n_steps + 1, nan);
  study.ela_path.assign(n_steps + 1, nan);
  study.total_path.assign(n_steps + 1, nan);
  if (results[0].ok) {  // stored trajectory: stream seed = base_seed (m = 0)
    study.kin_path[0] = kin0;
    study.ela_path[0] = ela0;
    study.total_path[0] = kin0 + ela0;
    for (int s = 0; s < n_steps; ++s) {
      study.kin_path[s + 1] = results[0].kin[s];
      study.ela_path[s + 1] = results[0].ela[s];
      study.total_path[s + 1] = results[0].kin[s] + results[0].ela[s];
    }
  }
  return study;
}

double conserved_relative_drift(const EnergyStudy& study) {
  if (study.conserved_mean.empty()) return 0.0;
  double base = study.conserved_mean.front();
  if (base == 0.0) {
    double max_abs = 0.0;
    for (double c : study.conserved_mean) max_abs = std::max(max_abs, std::abs(c));
    return max_abs;
  }
  double drift = 0.0;
  for (double c : study.conserved_mean) {
    drift = std::max(drift, std::abs(c - base) / std::abs(base));
  }
  return drift;
}

void BetaSweepSpec::validate() const {
  model::preset(preset);
  if (alpha_hat != 0 && alpha_hat != 1) throw ConfigError("alpha_hat must be 0 or 1");
  if (beta_list.empty()) throw ConfigError("beta_list must not be empty");
  for (double b : beta_list) {
    if (!(b >= 0.0) || b >= 0.5) {
      throw ConfigError("beta " + std::to_string(b) + " outside [0, 1/2)");
    }
  }
  if (mc_list.empty()) throw ConfigError("mc_list must not be empty");
  for (int m : mc_list) {
    if (m < 1) throw ConfigError("mc values must be >= 1");
  }
  if (n_cells < 2) throw ConfigError("n_cells must be >= 2");
  if (n_modes < 1) throw ConfigError("n_modes must be >= 1");
  if (!(roughness_threshold > 0.0)) throw ConfigError("threshold must be positive");
  dyadic_level(k);
  steps_in_horizon(horizon, k);
}

BetaSweepTable run_beta_sweep(const BetaSweepSpec& spec) {
  spec.validate();
  const model::Problem problem = model::preset(spec.preset);
  const fem::Grid1D grid(spec.n_cells);
  const int n_steps = steps_in_horizon(spec.horizon, spec.k);

  std::vector<int> mcs = spec.mc_list;
  std::sort(mcs.begin(), mcs.end());
  const int mc_max = mcs.back();

  noise::NoiseConfig ncfg;
  ncfg.n_modes = spec.n_modes;
  ncfg.fine_level = 2 * dyadic_level(spec.k);
  ncfg.horizon = spec.horizon;

  BetaSweepTable table;
  for (double beta : spec.beta_list) {
    const scheme::SchemeParams params{spec.alpha_hat, beta, spec.k, spec.horizon};
    const scheme::SchemeOperators ops(grid, params, spec.n_modes);

    struct Series {
      bool ok = false;
      std::vector<double> conserved;
    };
    std::vector<Series> results(mc_max);
    parallel_for(mc_max, [&](int m) {
      Series& res = results[m];
      try {
        const noise::WienerPath path =
            noise::sample_path(ncfg, noise::stream_seed(spec.base_seed, m));
        const noise::IncrementSet inc = noise::coarse_increments(path, spec.k);
        res.conserved.resize(n_steps);
        scheme::simulate(problem, ops, inc, [&](const scheme::SchemeState& s) {
          res.conserved[s.n - 1] =
              scheme::conserved_two_step_energy(s, ops.mass(), ops.stiffness());
        });
        res.ok = true;
      } catch (const BlowUpError&) {
        res.ok = false;
        res.conserved.clear();
      }
    });

    int excluded = 0;
    for (const auto& res : results) {
      if (!res.ok) ++excluded;
    }
    check_blow_up_budget(excluded, mc_max);
    table.excluded += excluded;

    int threshold_mc = -1;
    for (int mc : mcs) {
      // mean over the nested prefix of samples, in index order
      std::vector<double> mean(n_steps, 0.0);
      int used = 0;
      {
        std::vector<NeumaierSum> acc(n_steps);
        for (int m = 0; m < mc; ++m) {
          if (!results[m].ok) continue;
          ++used;
          for (int s = 0; s < n_steps; ++s) acc[s].add(results[m].conserved[s]);
        }
        for (int s = 0; s < n_steps; ++s) {
          mean[s] = used > 0 ? acc[s].value() / used : 0.0;
        }
      }
      // roughness of the curve on the second half of [0, T]
      double roughness = 0.0;
      for (int s = 0; s + 1 < n_steps; ++s) {
        double t = (s + 1) * spec.k;
        if (t < 0.5 * spec.horizon) continue;
        if (mean[s] > 0.0) {
          roughness = std::max(roughness, std::abs(mean[s + 1] - mean[s]) / mean[s]);
        }
      }
      table.rows.push_back({beta, mc, roughness});
      if (threshold_mc < 0 && roughness < spec.roughness_threshold) {
        threshold_mc = mc;
      }
    }
    table.min_mc.emplace_back(beta, threshold_mc);
  }
  return table;
}

RateFit fit_rate(std::span<const std::pair<double, double>> rows) {
  if (rows.size() < 3) {
    throw ConfigError("rate fit needs at least 3 (k, err) rows");
  }
  for (const auto& [k, err] : rows) {
    if (!(err > 0.0)) {
      throw ConfigError(
          "rate fit is degenerate: error at k = " + format_g17(k) +
          " is zero; use an exact-equality check instead");
    }
  }
  const double n = static_cast<double>(rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [k, err] : rows) {
    double x = std::log2(k);
    double y = std::log2(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateFit fit;
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [k, err] : rows) {
    double r = std::log2(err) - (fit.slope * std::log2(k) + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

void write_rate_csv(const RateTable& table, const std::filesystem::path& out) {
  std::ostringstream os;
  os << "k,err_u_l2,err_u_h1,err_v_l2\n";
  for (const auto& row : table.rows) {
    os << format_g17(row.k) << "," << format_g17(row.err_u_l2) << ","
       << format_g17(row.err_u_h1) << "," << format_g17(row.err_v_l2) << "\n";
  }
  os << "# slope_u_l2=" << format_g17(table.slope_u_l2)
     << " slope_u_h1=" << format_g17(table.slope_u_h1)
     << " slope_v_l2=" << format_g17(table.slope_v_l2)
     << " excluded=" << table.excluded << "\n";
  write_file_atomic(out, os.str());
}

void write_energy_csv(const EnergyStudy& study, const std::filesystem::path& out) {
  std::ostringstream os;
  os << "t,e_kin_mean,e_ela_mean,e_total_mean,e_kin_path,e_ela_path,e_total_path\n";
  for (std::size_t i = 0; i < study.t.size(); ++i) {
    os << format_g17(study.t[i]) << "," << format_g17(study.kin_mean[i]) << ","
       << format_g17(study.ela_mean[i]) << "," << format_g17(study.total_mean[i])
       << "," << format_g17(study.kin_path[i]) << ","
       << format_g17(study.ela_path[i]) << "," << format_g17(study.total_path[i])
       << "\n";
  }
  write_file_atomic(out, os.str());
}

void write_beta_sweep_csv(const BetaSweepTable& table,
                          const std::filesystem::path& out) {
  std::ostringstream os;
  os << "beta,mc,roughness\n";
  for (const auto& row : table.rows) {
    os << format_g17(row.beta) << "," << row.mc << "," << format_g17(row.roughness)
       << "\n";
  }
  write_file_atomic(out, os.str());
}

}  // namespace stochwave::experiments
