#include <benchmark/benchmark.h>
#include <omp.h>

#include <string>

#include "rsl/harness.hpp"
#include "rsl/spectral.hpp"

namespace {

const rsl::ProblemSpec& canonical() {
  static const rsl::ProblemSpec spec =
      rsl::load_config(std::string(RSL_CONFIG_DIR) + "/canonical.json").spec;
  return spec;
}

// Windows n = 10 .. 10 + range(0) - 1.
void sweep(benchmark::State& state, rsl::Execution execution) {
  rsl::SpectralOptions opt;
  opt.execution = execution;
  const int n_max = 10 + static_cast<int>(state.range(0)) - 1;
  for (auto _ : state) {
    rsl::Spectrum sp = rsl::find_eigenvalues(canonical(), 10, n_max, opt);
    benchmark::DoNotOptimize(sp.pairs.data());
  }
  state.counters["windows"] = static_cast<double>(state.range(0));
  state.counters["threads"] = execution == rsl::Execution::Parallel ? omp_get_max_threads() : 1;
}

void BM_FindEigenvaluesSerial(benchmark::State& state) { sweep(state, rsl::Execution::Serial); }
void BM_FindEigenvaluesParallel(benchmark::State& state) { sweep(state, rsl::Execution::Parallel); }

void BM_ScaledCharacteristic(benchmark::State& state) {
  const double s = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rsl::scaled_characteristic(canonical(), s, 1e-10));
}

}  // namespace

BENCHMARK(BM_FindEigenvaluesSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FindEigenvaluesParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScaledCharacteristic)->Arg(10)->Arg(40)->Arg(160)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
