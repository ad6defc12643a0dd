// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "wsn/arcs.hpp"
#include "wsn/report.hpp"

namespace {

wsn::Instance dense(int sensors) {
  return wsn::gen_random(sensors, 10 * sensors, wsn::Area{40, 40}, 1, wsn::default_config());
}

void BM_BuildArcsSerial(benchmark::State& state) {
  const wsn::Instance in = dense(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wsn::build_arcs_serial(in));
}
BENCHMARK(BM_BuildArcsSerial)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_BuildArcsParallel(benchmark::State& state) {
  const wsn::Instance in = dense(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wsn::build_arcs(in));
}
BENCHMARK(BM_BuildArcsParallel)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

// Arg is the thread count; 0 uses the OpenMP default.
void BM_Experiment(benchmark::State& state) {
  wsn::ExperimentSpec spec;
  spec.seeds.clear();
  for (std::uint64_t s = 0; s < 40; ++s) spec.seeds.push_back(s);
  spec.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wsn::run_experiment(spec));
}
BENCHMARK(BM_Experiment)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
