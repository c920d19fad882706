#include <benchmark/benchmark.h>

#include "repsale/commitment.hpp"
#include "repsale/equilibrium.hpp"
#include "repsale/infinite_horizon.hpp"
#include "repsale/linear_oracle.hpp"
#include "repsale/simulator.hpp"

using namespace repsale;

static void BM_ImplementForPrice(benchmark::State& state) {
  const auto d = Distribution::uniform();
  for (auto _ : state) benchmark::DoNotOptimize(implement_for_price(d, 0.81, 0.3));
}
BENCHMARK(BM_ImplementForPrice);

static void BM_SolveEquilibrium(benchmark::State& state) {
  const auto d = state.range(0) == 0 ? Distribution::uniform() : Distribution::power(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(d, 0.81));
}
BENCHMARK(BM_SolveEquilibrium)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
  SimConfig cfg;
  cfg.trials = static_cast<std::uint64_t>(state.range(0));
  cfg.seed = 7;
  cfg.mu = 0.81;
  cfg.profile = linear::on_path(0.81);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_Certificate(benchmark::State& state) {
  const auto m = infinite::DiscreteModel::example(0.01);
  const auto prof = infinite::example3pt(m);
  for (auto _ : state) benchmark::DoNotOptimize(infinite::verify_one_shot_deviation(m, prof));
}
BENCHMARK(BM_Certificate)->Unit(benchmark::kMillisecond);

static void BM_NaiveMdp(benchmark::State& state) {
  const auto m = infinite::DiscreteModel::example(0.01);
  for (auto _ : state) benchmark::DoNotOptimize(infinite::naive_mdp_value(m));
}
BENCHMARK(BM_NaiveMdp);

static void BM_SolveCommitment(benchmark::State& state) {
  const auto d = Distribution::uniform();
  for (auto _ : state) benchmark::DoNotOptimize(solve_commitment(d, 0.5));
}
BENCHMARK(BM_SolveCommitment)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
