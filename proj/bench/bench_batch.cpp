// Serial reference loop vs the OpenMP batch on the same configs.

#include <benchmark/benchmark.h>

#include "spnb/runner.hpp"

namespace {

spnb::ExperimentConfig regret_config() {
  spnb::ExperimentConfig c;
  c.scenario = "synthetic-rm";
  c.policies = {"thompson", "seq-thompson", "bayes-ucb", "seq-bayes-ucb",
                "ucbrev-plus"};
  c.k = 25;
  c.tau = 1000;
  c.runs = 16;
  c.seed = 1;
  return c;
}

spnb::ExperimentConfig bai_config() {
  spnb::ExperimentConfig c;
  c.scenario = "audibert-1";
  c.policies = {"ucbe", "seq-ucbe-lp", "seq-ucbe-lr", "sr-plus"};
  c.runs = 100;
  c.seed = 1;
  c.keep_series = false;
  return c;
}

void BM_RegretSerial(benchmark::State& st) {
  const auto c = regret_config();
  for (auto _ : st) benchmark::DoNotOptimize(spnb::run_batch_serial(c));
}

void BM_RegretParallel(benchmark::State& st) {
  const auto c = regret_config();
  const int threads = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(spnb::run_batch(c, threads));
}

void BM_BaiSerial(benchmark::State& st) {
  const auto c = bai_config();
  for (auto _ : st) benchmark::DoNotOptimize(spnb::run_batch_serial(c));
}

void BM_BaiParallel(benchmark::State& st) {
  const auto c = bai_config();
  const int threads = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(spnb::run_batch(c, threads));
}

}  // namespace

BENCHMARK(BM_RegretSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RegretParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BaiSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BaiParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)
    ->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
