#include <benchmark/benchmark.h>

#include "fsgm/augment.hpp"
#include "fsgm/synth.hpp"

namespace {

void BM_FsgmAugment(benchmark::State& state) {
  fsgm::ScenarioConfig sc = fsgm::preset_scenario("underrepresented-subgroup");
  sc.seed = 5;
  const auto data = fsgm::gen_conditional_gaussian(sc);
  fsgm::FsgmConfig config;
  config.pairs = fsgm::parse_mix_pairs("10>11,10>00");
  config.new_count = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = ++seed;
    benchmark::DoNotOptimize(fsgm::fsgm_augment(data, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FsgmAugment)->Arg(100)->Arg(610)->Arg(5000);

void BM_VanillaMixup(benchmark::State& state) {
  fsgm::ScenarioConfig sc = fsgm::preset_scenario("unbalanced-class");
  sc.seed = 5;
  const auto data = fsgm::gen_conditional_gaussian(sc);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fsgm::vanilla_mixup(
        data, static_cast<std::size_t>(state.range(0)), fsgm::MixupAlpha(1.0),
        ++seed));
  }
}
BENCHMARK(BM_VanillaMixup)->Arg(270)->Arg(5000);

void BM_BetaSample(benchmark::State& state) {
  fsgm::RngStream stream(1);
  const fsgm::MixupAlpha alpha(static_cast<double>(state.range(0)) / 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(fsgm::beta_sample(stream, alpha));
}
BENCHMARK(BM_BetaSample)->Arg(1)->Arg(10)->Arg(40);

}  // namespace
