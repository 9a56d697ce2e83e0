#include <benchmark/benchmark.h>

#include "adex/pareto.hpp"
#include "adex/policies.hpp"
#include "adex/simulator.hpp"

namespace {

using namespace adex;

Instance teaser() {
  return Instance(RewardFamily::gaussian(1.0), {0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
}

ExperimentState warm_state(const std::vector<std::int64_t>& counts) {
  ExperimentState st(RewardFamily::gaussian(1.0), static_cast<int>(counts.size()));
  const double means[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::int64_t n = 0; n < counts[i]; ++n) st.update(static_cast<int>(i), means[i]);
  return st;
}

void BM_solve_p_star_unit(benchmark::State& state) {
  const Instance inst = teaser();
  const CostModel costs = CostModel::unit();
  for (auto _ : state) benchmark::DoNotOptimize(solve_p_star(inst, costs));
}
BENCHMARK(BM_solve_p_star_unit);

void BM_solve_p_star_length_regret(benchmark::State& state) {
  const Instance inst = teaser();
  const CostModel costs = CostModel::length_regret(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_p_star(inst, costs));
}
BENCHMARK(BM_solve_p_star_length_regret);

void BM_solve_p_beta(benchmark::State& state) {
  const Instance inst = teaser();
  for (auto _ : state) benchmark::DoNotOptimize(solve_p_beta(inst, 0.7));
}
BENCHMARK(BM_solve_p_beta);

void BM_frontier_point(benchmark::State& state) {
  const Instance inst = teaser();
  for (auto _ : state) benchmark::DoNotOptimize(frontier_point(inst, 0.5));
}
BENCHMARK(BM_frontier_point);

void BM_stopping_statistic(benchmark::State& state) {
  const auto st = warm_state({120, 180, 260, 700, 4400, 4600});
  for (auto _ : state) benchmark::DoNotOptimize(stopping_statistic(st));
}
BENCHMARK(BM_stopping_statistic);

void BM_alpha_balanced(benchmark::State& state) {
  const auto st = warm_state({1700, 1700, 1700, 1700, 1700, 1700});
  for (auto _ : state) benchmark::DoNotOptimize(optimality_probabilities(st));
}
BENCHMARK(BM_alpha_balanced);

void BM_alpha_imbalanced(benchmark::State& state) {
  const auto st = warm_state({90, 140, 260, 640, 4300, 4700});
  for (auto _ : state) benchmark::DoNotOptimize(optimality_probabilities(st));
}
BENCHMARK(BM_alpha_imbalanced);

void BM_top_two_step(benchmark::State& state) {
  const auto st = warm_state({90, 140, 260, 640, 4300, 4700});
  AllocationPolicy policy(RuleConfig::make_top_two_fixed(0.7), st.family(), st.k());
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(policy.choose(st, rng));
}
BENCHMARK(BM_top_two_step);

void BM_run_trial(benchmark::State& state) {
  RunConfig rc{teaser(),
               RuleConfig::make_top_two_fixed(0.7, SamplerKind::exact_probabilities, 500),
               StoppingRule::heuristic(1000000),
               CostModel::length_regret(1.0),
               1000000,
               1,
               99,
               1};
  std::int64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(rc, 0));
    ++trial;
  }
}
BENCHMARK(BM_run_trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
