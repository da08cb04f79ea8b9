#include <benchmark/benchmark.h>

#include <vector>

#include "wum/fcm.hpp"
#include "wum/features.hpp"
#include "wum/log_ingest.hpp"
#include "wum/sessionizer.hpp"
#include "wum/synth.hpp"

namespace {

wum::SessionMatrix planted_matrix() {
  const auto sessions = wum::synth::planted_sessions({}, 1);
  return wum::build_features(sessions, {}).matrix;
}

void BM_CleanLog(benchmark::State& state) {
  wum::synth::CorpusSpec spec;
  spec.users = static_cast<std::size_t>(state.range(0));
  const auto lines = wum::synth::generate_access_log(spec, 1);
  const auto policy = wum::CleanPolicy::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(wum::clean_log(lines, policy));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lines.size()));
}
BENCHMARK(BM_CleanLog)->Arg(24)->Arg(200);

void BM_Sessionize(benchmark::State& state) {
  wum::synth::CorpusSpec spec;
  spec.users = 200;
  const auto cleaned = wum::clean_log(wum::synth::generate_access_log(spec, 1), wum::CleanPolicy::defaults());
  const auto users = wum::identify_users(cleaned.records);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wum::sessionize_all(users, wum::Heuristic::toh1, std::chrono::seconds(1800)));
  }
}
BENCHMARK(BM_Sessionize);

void BM_MembershipUpdate(benchmark::State& state) {
  const auto matrix = planted_matrix();
  const auto x = matrix.dense();
  wum::Rng rng(1);
  const auto v = wum::initial_centers(x, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(wum::update_memberships(x, v, matrix.weights, 2.0));
}
BENCHMARK(BM_MembershipUpdate)->Arg(4)->Arg(16)->Arg(60);

void BM_RunFcm(benchmark::State& state) {
  const auto matrix = planted_matrix();
  wum::FcmConfig cfg;
  cfg.clusters = static_cast<std::size_t>(state.range(0));
  cfg.fuzziness = 1.3;
  for (auto _ : state) benchmark::DoNotOptimize(wum::run_fcm(matrix, cfg));
}
BENCHMARK(BM_RunFcm)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const auto matrix = planted_matrix();
  wum::SweepConfig cfg;
  cfg.c_min = 2;
  cfg.c_max = static_cast<std::size_t>(state.range(0));
  cfg.restarts = 2;
  cfg.fcm.fuzziness = 1.3;
  for (auto _ : state) benchmark::DoNotOptimize(wum::sweep_clusters(matrix, cfg));
}
BENCHMARK(BM_Sweep)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
