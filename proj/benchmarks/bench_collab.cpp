#include <benchmark/benchmark.h>

#include <vector>

#include "collab/events.hpp"
#include "collab/gridbound.hpp"
#include "collab/normal.hpp"
#include "collab/synth.hpp"

using namespace collab;

namespace {

std::vector<double> chain(std::size_t h) {
  std::vector<double> acc;
  for (std::size_t i = 0; i < h; ++i) acc.push_back(0.3 + 0.6 * double(i) / double(h - 1));
  return acc;
}

void BM_TripletEnumeration(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  const auto p = ordered_chain(chain(h), 10000, 1, "P");
  const auto q = ordered_chain(chain(h), 10000, 2, "Q");
  for (auto _ : state) {
    std::size_t n = 0;
    enumerate_triplet_points(p, q, [&](const TripletPoint&) { ++n; }, 1);
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(triplet_point_count(h)));
}
BENCHMARK(BM_TripletEnumeration)->Arg(10)->Arg(30)->Arg(66)->Unit(benchmark::kMillisecond);

void BM_DominanceTable(benchmark::State& state) {
  const auto big = ordered_chain(chain(static_cast<std::size_t>(state.range(0))), 10000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dominance_table(big).zeta_max);
}
BENCHMARK(BM_DominanceTable)->Arg(66)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_GridSearch(benchmark::State& state) {
  GridSearchConfig cfg;
  cfg.zeta = 0.05;
  cfg.mu = {0.6, 0.7, 0.8};
  cfg.params = {0.31, 0.38, 0.005, 0.008};
  cfg.p_grid_step = state.range(0) / 1000.0;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(max_residual_grid(cfg).max_value);
}
BENCHMARK(BM_GridSearch)->Arg(20)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_InverseNormal(benchmark::State& state) {
  double p = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_normal_cdf(p));
    p = p > 0.999 ? 1e-6 : p + 1e-4;
  }
}
BENCHMARK(BM_InverseNormal);

}  // namespace

BENCHMARK_MAIN();
