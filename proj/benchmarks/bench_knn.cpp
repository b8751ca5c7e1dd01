#include <benchmark/benchmark.h>

#include "fsgm/knn.hpp"
#include "fsgm/synth.hpp"

namespace {

fsgm::Dataset scenario_rows(std::size_t per_cell) {
  fsgm::ScenarioConfig sc = fsgm::preset_scenario("unbalanced-groups");
  for (auto& row : sc.counts.counts) row = {per_cell, per_cell};
  sc.seed = 11;
  return fsgm::gen_conditional_gaussian(sc);
}

void BM_KnnInSubgroup(benchmark::State& state) {
  const auto data = scenario_rows(static_cast<std::size_t>(state.range(0)));
  const auto target = fsgm::subgroup_indices(data, {0, 0});
  std::size_t q = 0;
  for (auto _ : state) {
    auto result = fsgm::knn_among(data, data[q % data.size()].x, target, 5);
    benchmark::DoNotOptimize(result);
    ++q;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KnnInSubgroup)->RangeMultiplier(4)->Range(64, 4096);

void BM_StandardizerFit(benchmark::State& state) {
  const auto data = scenario_rows(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fsgm::Standardizer::fit(data));
  }
}
BENCHMARK(BM_StandardizerFit)->Arg(256)->Arg(2048);

}  // namespace
