#include <benchmark/benchmark.h>

#include <random>

#include "stochwave/dyadic.hpp"
#include "stochwave/experiments.hpp"
#include "stochwave/fem1d.hpp"
#include "stochwave/model.hpp"
#include "stochwave/noise.hpp"
#include "stochwave/scheme.hpp"

using namespace stochwave;

namespace {

fem::TriDiag system_like(int n) {
  fem::Grid1D grid(n + 1);
  fem::TriDiag m = fem::assemble_mass(grid);
  fem::TriDiag k = fem::assemble_stiffness(grid);
  double c = 0.5 * 0.015625 * 0.015625;
  for (int i = 0; i < n; ++i) m.diag[i] += c * k.diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    m.sub[i] += c * k.sub[i];
    m.sup[i] += c * k.sup[i];
  }
  return m;
}

}  // namespace

static void BM_TridiagFactor(benchmark::State& state) {
  fem::TriDiag a = system_like(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    fem::TriDiagSolver solver(a);
    benchmark::DoNotOptimize(solver);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TridiagFactor)->RangeMultiplier(4)->Range(63, 4095)->Complexity();

static void BM_TridiagSolve(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  fem::TriDiagSolver solver(system_like(n));
  std::vector<double> rhs(n, 1.0), x(n);
  for (auto _ : state) {
    solver.solve(rhs, x);
    benchmark::DoNotOptimize(x);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TridiagSolve)->RangeMultiplier(4)->Range(63, 4095)->Complexity();

static void BM_SamplePath(benchmark::State& state) {
  noise::NoiseConfig cfg;
  cfg.fine_level = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    noise::WienerPath p = noise::sample_path(cfg, ++seed);
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations() * 3 *
                          (int64_t{1} << state.range(0)));
}
BENCHMARK(BM_SamplePath)->DenseRange(14, 20, 2);

static void BM_CoarseIncrements(benchmark::State& state) {
  noise::NoiseConfig cfg;
  cfg.fine_level = 18;
  noise::WienerPath path = noise::sample_path(cfg, 7);
  double k = dyadic_value(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    noise::IncrementSet inc = noise::coarse_increments(path, k);
    benchmark::DoNotOptimize(inc);
  }
}
BENCHMARK(BM_CoarseIncrements)->DenseRange(3, 9, 3);

static void BM_SchemeStep(benchmark::State& state) {
  model::Problem p = model::preset("sin-sigma");
  scheme::SchemeParams params{1, 0.0, dyadic_value(6), 1.0};
  fem::Grid1D grid(static_cast<int>(state.range(0)));
  scheme::SchemeOperators ops(grid, params, 3);
  noise::NoiseConfig cfg;
  cfg.fine_level = 12;
  noise::IncrementSet inc =
      noise::coarse_increments(noise::sample_path(cfg, 11), params.k);
  scheme::SchemeState s = scheme::init_state(p, ops, inc);
  for (auto _ : state) {
    scheme::SchemeState next = scheme::step(s, p, ops, inc);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_SchemeStep)->RangeMultiplier(2)->Range(64, 512);

static void BM_MonteCarloSample(benchmark::State& state) {
  // one full coupled sample of the desk-scale convergence study
  model::Problem p = model::preset("sin-sigma");
  fem::Grid1D grid(64);
  scheme::SchemeParams ref_params{1, 0.0, dyadic_value(9), 1.0};
  scheme::SchemeOperators ref_ops(grid, ref_params, 3);
  scheme::SchemeParams coarse_params{1, 0.0, dyadic_value(6), 1.0};
  scheme::SchemeOperators coarse_ops(grid, coarse_params, 3);
  noise::NoiseConfig cfg;
  cfg.fine_level = 18;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    noise::WienerPath path = noise::sample_path(cfg, ++seed);
    scheme::SchemeState ref =
        scheme::simulate(p, ref_ops, noise::coarse_increments(path, ref_params.k));
    scheme::SchemeState coarse = scheme::simulate(
        p, coarse_ops, noise::coarse_increments(path, coarse_params.k));
    benchmark::DoNotOptimize(ref);
    benchmark::DoNotOptimize(coarse);
  }
}
BENCHMARK(BM_MonteCarloSample);

BENCHMARK_MAIN();
