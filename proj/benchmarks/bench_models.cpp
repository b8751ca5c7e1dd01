#include <benchmark/benchmark.h>

#include "fsgm/metrics.hpp"
#include "fsgm/model.hpp"
#include "fsgm/synth.hpp"

namespace {

fsgm::Dataset training_rows() {
  fsgm::ScenarioConfig sc = fsgm::preset_scenario("unbalanced-class");
  sc.seed = 9;
  return fsgm::gen_conditional_gaussian(sc);
}

void BM_TrainForest(benchmark::State& state) {
  const auto data = training_rows();
  fsgm::ModelSpec spec;
  spec.kind = fsgm::ModelKind::kForest;
  spec.forest.n_trees = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fsgm::train_model(data, spec));
}
BENCHMARK(BM_TrainForest)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TrainMlp(benchmark::State& state) {
  const auto data = training_rows();
  fsgm::ModelSpec spec;
  spec.kind = fsgm::ModelKind::kMlp;
  spec.mlp.epochs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fsgm::train_model(data, spec));
}
BENCHMARK(BM_TrainMlp)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto data = training_rows();
  fsgm::ScenarioConfig sc = fsgm::balanced_test_config(
      fsgm::preset_scenario("unbalanced-class"), 500, 3);
  const auto test = fsgm::gen_conditional_gaussian(sc);
  fsgm::ModelSpec spec;
  const auto model = fsgm::train_model(data, spec);
  for (auto _ : state) benchmark::DoNotOptimize(fsgm::evaluate(model, test));
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

}  // namespace
