#include <benchmark/benchmark.h>

#include "mifade/fading.hpp"
#include "mifade/montecarlo.hpp"
#include "mifade/scenario.hpp"
#include "mifade/system.hpp"

namespace {

const mifade::system::SystemModel& default_model() {
  static const mifade::system::SystemModel model(mifade::scenario::load_scenario(
      mifade::scenario::resolve_scenario(mifade::scenario::kDefaultScenarioName)));
  return model;
}

void BM_Simulate(benchmark::State& state) {
  mifade::montecarlo::SimulationConfig config;
  config.samples = static_cast<std::size_t>(state.range(0));
  config.workers = static_cast<unsigned>(state.range(1));
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mifade::montecarlo::simulate(default_model(), config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_Simulate)
    ->ArgsProduct({{10'000, 100'000}, {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_PathLengths(benchmark::State& state) {
  const auto& path = default_model().scenario().links.front().path;
  mifade::random::Stream stream(7, {});
  std::vector<double> lengths(path.segments.size());
  for (auto _ : state) {
    mifade::fading::sample_path_lengths(path, stream, lengths);
    benchmark::DoNotOptimize(lengths.data());
  }
}

BENCHMARK(BM_PathLengths);

}  // namespace
