// Serial reference vs OpenMP kernels for setting evaluation and full SQPT.

#include <benchmark/benchmark.h>

#include "sqpt/kernels.hpp"
#include "sqpt/measure.hpp"
#include "sqpt/tomo.hpp"

namespace {

using namespace sqpt;

std::vector<MeasurementSetting> all_pairs(std::size_t dim) {
  const auto states = input_state_set(dim);
  std::vector<MeasurementSetting> out;
  out.reserve(states.size() * states.size());
  for (const auto& in : states)
    for (const auto& obs : states) out.push_back(projector_setting(in, obs));
  return out;
}

BackendConfig config(int64_t sampled) {
  return sampled ? BackendConfig::sampled(4096, 17) : BackendConfig::exact();
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto ch = random_cptp(1, 3, dim);
  const auto settings = all_pairs(dim);
  const auto cfg = config(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_settings_serial(ch, settings, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(settings.size()));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto ch = random_cptp(1, 3, dim);
  const auto settings = all_pairs(dim);
  const auto cfg = config(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_settings_parallel(ch, settings, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(settings.size()));
}

void BM_FullSqpt(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto ch = random_cptp(2, 2, dim);
  FullSqptOptions o;
  o.exec = state.range(1) ? Execution::parallel : Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(full_sqpt(ch, BackendConfig::exact(), o));
}

} // namespace

BENCHMARK(BM_EvaluateSerial)->ArgsProduct({{2, 4, 8}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EvaluateParallel)->ArgsProduct({{2, 4, 8}, {0, 1}})->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_FullSqpt)->ArgsProduct({{2, 4, 8}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
