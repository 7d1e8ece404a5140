#include <benchmark/benchmark.h>

#include "dyadic/choquet.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/random.hpp"
#include "dyadic/sampling.hpp"

namespace {

using namespace dyadic;

void BM_Content(benchmark::State& state) {
  const Lattice lat(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const ContentHandle h = make_content(lat, Gauge::power(0.5));
  Rng rng(7);
  const GridSet set = random_set(lat, rng, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(h(set));
  state.SetItemsProcessed(state.iterations() * lat.cell_count());
}
BENCHMARK(BM_Content)->Args({1, -10})->Args({1, -16})->Args({2, -6})->Args({2, -10})->Args({3, -6});

void BM_ChoquetIntegral(benchmark::State& state) {
  const Lattice lat(1, static_cast<int>(state.range(0)));
  const ContentHandle h = make_content(lat, Gauge::power(1.0));
  Rng rng(3);
  const GridFunction f = random_step_function(lat, rng, 16);
  for (auto _ : state) benchmark::DoNotOptimize(choquet_integral(f, h));
}
BENCHMARK(BM_ChoquetIntegral)->Arg(-8)->Arg(-12);

void BM_DyadicMaximal(benchmark::State& state) {
  const Lattice lat(1, static_cast<int>(state.range(0)));
  const ContentHandle h = make_content(lat, Gauge::power(0.5));
  Rng rng(5);
  const GridFunction f = random_step_function(lat, rng, 8);
  for (auto _ : state) benchmark::DoNotOptimize(dyadic_maximal(f, h).values.max());
}
BENCHMARK(BM_DyadicMaximal)->Arg(-6)->Arg(-10);

}  // namespace

BENCHMARK_MAIN();
