// Serial references against their OpenMP counterparts.
//
//   OMP_NUM_THREADS=4 ./bench_kernels

#include <benchmark/benchmark.h>

#include <random>

#include "fzs/device_sim.hpp"
#include "fzs/engine.hpp"
#include "fzs/kernels.hpp"
#include "fzs/rule_dsl.hpp"
#include "fzs/trace_io.hpp"

namespace {

std::vector<fzs::Telemetry> random_telemetry(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> gu(0, 100), gt(20, 100), nt(0, 200);
  std::vector<fzs::Telemetry> out(n);
  for (auto& t : out) t = {gu(rng), gt(rng), nt(rng)};
  return out;
}

const fzs::Scenario& scenario() {
  static const auto sc = fzs::load_scenario(std::string(FZS_SOURCE_DIR) + "/scenarios/default_2000.scenario");
  return sc;
}

void BM_InferGrouped(benchmark::State& state) {
  const auto& rb = fzs::builtin_rulebase();
  const auto tele = random_telemetry(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fzs::infer(rb, tele[i++ & 1023]).score);
  }
}
BENCHMARK(BM_InferGrouped);

void BM_InferPerRule(benchmark::State& state) {
  const auto& rb = fzs::builtin_rulebase();
  const auto tele = random_telemetry(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t = tele[i++ & 1023];
    const std::vector<double> in{t.gu, t.gt, t.nt};
    benchmark::DoNotOptimize(fzs::infer_reference(rb, in).score);
  }
}
BENCHMARK(BM_InferPerRule);

void BM_BatchSerial(benchmark::State& state) {
  const auto& rb = fzs::builtin_rulebase();
  const auto tele = random_telemetry(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fzs::infer_batch_serial(rb, tele));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchSerial)->Arg(8181)->UseRealTime();

void BM_BatchOpenMP(benchmark::State& state) {
  const auto& rb = fzs::builtin_rulebase();
  const auto tele = random_telemetry(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fzs::infer_batch(rb, tele));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = fzs::max_threads();
}
BENCHMARK(BM_BatchOpenMP)->Arg(8181)->UseRealTime();

void BM_ArmsSerial(benchmark::State& state) {
  const auto& sc = scenario();
  const auto rb = fzs::scenario_rules(sc);
  for (auto _ : state) benchmark::DoNotOptimize(fzs::simulate_arms_serial(sc, rb, fzs::kAllArms));
}
BENCHMARK(BM_ArmsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ArmsOpenMP(benchmark::State& state) {
  const auto& sc = scenario();
  const auto rb = fzs::scenario_rules(sc);
  for (auto _ : state) benchmark::DoNotOptimize(fzs::simulate_arms(sc, rb, fzs::kAllArms));
  state.counters["threads"] = fzs::max_threads();
}
BENCHMARK(BM_ArmsOpenMP)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
