#include <benchmark/benchmark.h>

#include <cmath>

#include "mifade/numerics/quadrature.hpp"
#include "mifade/numerics/special_functions.hpp"

namespace {

void BM_GaussHermiteRule(benchmark::State& state) {
  const auto order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mifade::numerics::gauss_hermite_rule(order));
  }
  state.SetComplexityN(order);
}

BENCHMARK(BM_GaussHermiteRule)->RangeMultiplier(2)->Range(20, 640)->Complexity()->Unit(benchmark::kMicrosecond);

void BM_Erfcx(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mifade::numerics::erfcx(x));
    x = x > 30.0 ? -3.0 : x + 0.013;
  }
}

BENCHMARK(BM_Erfcx);

void BM_QFunction(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mifade::numerics::q_function(x));
    x = x > 8.0 ? -8.0 : x + 0.007;
  }
}

BENCHMARK(BM_QFunction);

}  // namespace
