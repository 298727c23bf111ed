// Serial reference vs OpenMP kernels. With one core the two should match;
// the comparison is meaningful on multi-core hosts.

#include <benchmark/benchmark.h>

#include "sirs/dynamics.hpp"

namespace {

using sirs::Execution;

sirs::ModelParams w3_base() { return sirs::validate_params(0.9331, 3.1832, 3.0047, 0.6355, 3); }

std::vector<double> w3_grid(int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(3.0047 - (3.0047 - 3.0029) * i / (n - 1));
  return g;
}

void BM_Sweep(benchmark::State& state, Execution exec) {
  const auto base = w3_base();
  const auto grid = w3_grid(static_cast<int>(state.range(0)));
  sirs::SweepOptions opt;
  opt.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(sirs::bifurcation_sweep(base, "gamma", grid, opt));
  state.counters["threads"] = exec == Execution::Parallel ? sirs::parallel_jobs() : 1;
}

void BM_Displacement(benchmark::State& state, Execution exec) {
  const auto m = sirs::validate_params(1, 5.417, 7.195, 0.75, 2);
  double z = 0;
  for (const auto& e : sirs::endemic_equilibria(m))
    if (sirs::is_focus(e.kind)) z = e.z;
  sirs::CycleOptions opt;
  opt.exec = exec;
  opt.samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sirs::find_limit_cycles(m, z, opt));
  state.counters["threads"] = exec == Execution::Parallel ? sirs::parallel_jobs() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sweep, serial, Execution::Serial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, parallel, Execution::Parallel)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Displacement, serial, Execution::Serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Displacement, parallel, Execution::Parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
