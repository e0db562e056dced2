#include <benchmark/benchmark.h>

#include <random>

#include "colcirc/circuit.hpp"
#include "colcirc/sample_circuits.hpp"
#include "colcirc/synth.hpp"

namespace {

using namespace colcirc;

void BM_AffineCircuit(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  synth::Rng rng(1);
  auto c = affine_circuit(ElementType::u(32));
  ColumnFamily in{{"col", synth::uniform(rng, n, ElementType::u(32), 0, 1 << 20)}};
  EvalOptions opt;
  opt.threads = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_circuit(c, in, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AffineCircuit)->Args({1 << 12, 1})->Args({1 << 20, 1})->Args({1 << 20, 4})->UseRealTime();

void BM_RevenueQuery(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  synth::Rng rng(2);
  const auto u32 = ElementType::u(32);
  ColumnFamily li{{"shipdate", synth::uniform(rng, n, u32, 8400, 9500)},
                  {"discount", synth::uniform(rng, n, u32, 0, 10)},
                  {"quantity", synth::uniform(rng, n, u32, 1, 50)},
                  {"extendedprice", synth::uniform(rng, n, ElementType::i(64), 90000, 10500000)}};
  auto c = q6_circuit();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_circuit(c, li));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RevenueQuery)->Arg(1 << 14)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
