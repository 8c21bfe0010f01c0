#include <benchmark/benchmark.h>

#include <vector>

#include "mifade/analytics.hpp"
#include "mifade/circuit.hpp"
#include "mifade/numerics/quadrature.hpp"

namespace {

using mifade::LognormalParams;
namespace analytics = mifade::analytics;

// Closed form against the quadrature it replaces.
void BM_CapacityFastPath(benchmark::State& state) {
  const LognormalParams snr{3.0, 2.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::ergodic_capacity(snr, 1000.0));
  }
}

BENCHMARK(BM_CapacityFastPath);

void BM_CapacityQuadrature(benchmark::State& state) {
  const LognormalParams snr{3.0, 2.5};
  const auto& rule = mifade::numerics::shared_gauss_hermite_rule(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::ergodic_capacity_quadrature(snr, 1000.0, rule));
  }
}

BENCHMARK(BM_CapacityQuadrature)->Arg(20)->Arg(100)->Arg(500);

void BM_AverageBer(benchmark::State& state) {
  const auto& mod = analytics::find_modulation("bpsk");
  const auto& rule = mifade::numerics::shared_gauss_hermite_rule(static_cast<int>(state.range(0)));
  const LognormalParams snr{2.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::average_ber(snr, mod, rule));
  }
}

BENCHMARK(BM_AverageBer)->Arg(20)->Arg(100)->Arg(500);

void BM_MgfMatch(benchmark::State& state) {
  const std::vector<LognormalParams> addends(static_cast<std::size_t>(state.range(0)), LognormalParams{0.5, 1.0});
  const auto& rule = mifade::numerics::shared_gauss_hermite_rule();
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytics::mgf_match_lognormal_sum(addends, rule));
  }
}

BENCHMARK(BM_MgfMatch)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_MurecDesign(benchmark::State& state) {
  mifade::circuit::CoilSpec coil;
  coil.radius = 0.6;
  coil.turns = 200;
  coil.self_resistance = 2.2619;
  coil.base_self_inductance = 0.0894;
  std::vector<double> targets;
  for (int i = 0; i < state.range(0); ++i) targets.push_back(30e3 + 5e3 * i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mifade::circuit::design_murec(targets, coil, mifade::circuit::Side::transmit));
  }
}

BENCHMARK(BM_MurecDesign)->DenseRange(1, 8)->Unit(benchmark::kMicrosecond);

}  // namespace
