#include <benchmark/benchmark.h>

#include "schedkit/flow.hpp"
#include "schedkit/model.hpp"
#include "schedkit/mpc.hpp"
#include "schedkit/prec.hpp"
#include "schedkit/unrelated.hpp"

using namespace schedkit;

static void BM_SolveMakespan(benchmark::State& state) {
  model::GenParams params;
  params.n = static_cast<int>(state.range(0));
  params.m = 5;
  params.p_max = 10;
  auto inst =
      model::generate_unrelated(1, model::Family::unrelated_dense, params);
  for (auto _ : state) {
    auto res = unrelated::solve_makespan(inst, 0.2);
    benchmark::DoNotOptimize(res.value);
  }
  state.SetLabel("|E|=" + std::to_string(inst.edges.size()));
}
BENCHMARK(BM_SolveMakespan)->RangeMultiplier(2)->Range(16, 256);

static void BM_SolveWeightedCompletion(benchmark::State& state) {
  model::GenParams params;
  params.n = static_cast<int>(state.range(0));
  params.m = 3;
  params.p_max = 8;
  params.w_max = 9;
  auto inst =
      model::generate_unrelated(2, model::Family::unrelated_dense, params);
  for (auto _ : state) {
    auto res = unrelated::solve_weighted_completion(inst, 0.2);
    benchmark::DoNotOptimize(res.value);
  }
}
BENCHMARK(BM_SolveWeightedCompletion)->DenseRange(4, 12, 4);

static void BM_MaxFlowApprox(benchmark::State& state) {
  Rng rng(7);
  flow::RawFlowGraph raw;
  int n = static_cast<int>(state.range(0));
  raw.n = n;
  raw.a.assign(n, 0.0);
  raw.b.assign(n, 0.0);
  for (int i = 0; i < n / 4; ++i) raw.a[i] = rng.next_int(1, 8);
  for (int i = 0; i < n / 4; ++i) raw.b[n - 1 - i] = rng.next_int(1, 8);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_double() < 8.0 / n) raw.edges.push_back({u, v});
  raw.edges.push_back({0, n - 1});
  auto [inst, lift] = flow::normalize(raw, 1.0);
  for (auto _ : state) {
    auto f = flow::max_flow_approx(inst, 0.2);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetLabel("|E|=" + std::to_string(inst.edges.size()));
}
BENCHMARK(BM_MaxFlowApprox)->RangeMultiplier(2)->Range(32, 256);

static void BM_ListScheduling(benchmark::State& state) {
  model::GenParams params;
  params.n = static_cast<int>(state.range(0));
  params.m = 4;
  params.p_max = 6;
  params.density = 4.0 / params.n;
  auto inst =
      model::generate_prec(3, model::Family::prec_random_dag, params);
  auto q = prec::chain_bounds(inst);
  std::vector<double> f(q.begin(), q.end());
  for (auto _ : state) {
    auto s = prec::list_scheduling(inst, f);
    benchmark::DoNotOptimize(s.completion.data());
  }
}
BENCHMARK(BM_ListScheduling)->RangeMultiplier(4)->Range(64, 4096);

static void BM_SolvePrecLp(benchmark::State& state) {
  model::GenParams params;
  params.n = static_cast<int>(state.range(0));
  params.m = 2;
  params.p_max = 4;
  params.w_max = 6;
  params.density = 0.3;
  auto inst =
      model::generate_prec(4, model::Family::prec_random_dag, params);
  for (auto _ : state) {
    auto sol = prec::solve_prec_lp(inst, 0.2);
    benchmark::DoNotOptimize(sol.completion.data());
  }
}
BENCHMARK(BM_SolvePrecLp)->DenseRange(4, 8, 2);

BENCHMARK_MAIN();
