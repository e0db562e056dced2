#include <benchmark/benchmark.h>

#include "colcirc/sample_circuits.hpp"
#include "colcirc/synth.hpp"
#include "colcirc/transform.hpp"

namespace {

using namespace colcirc;

std::set<std::string> all_vertices(const Circuit& c) {
  std::set<std::string> ids;
  for (const auto& [id, op] : c.vertices()) ids.insert(id);
  return ids;
}

void BM_Dedup(benchmark::State& state) {
  auto c = q6_circuit();
  auto u = circuit_union(c, c);
  for (auto _ : state) benchmark::DoNotOptimize(eliminate_duplicate_vertices(u));
}
BENCHMARK(BM_Dedup);

void BM_FuseAndEvaluate(benchmark::State& state) {
  synth::Rng rng(5);
  auto c = affine_circuit(ElementType::u(32));
  // The catalog keeps fused names for the whole process; fuse once.
  static const Circuit fused = fuse_subcircuit(c, all_vertices(c), "bench_affine");
  ColumnFamily in{{"col", synth::uniform(rng, 1 << 16, ElementType::u(32), 0, 1 << 20)}};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_circuit(fused, in));
}
BENCHMARK(BM_FuseAndEvaluate);

void BM_InducedSubcircuit(benchmark::State& state) {
  auto c = q6_circuit();
  auto ids = all_vertices(c);
  std::set<std::string> half;
  for (const auto& id : ids) {
    if (half.size() * 2 < ids.size()) half.insert(id);
  }
  for (auto _ : state) benchmark::DoNotOptimize(induced_subcircuit(c, half));
}
BENCHMARK(BM_InducedSubcircuit);

}  // namespace

BENCHMARK_MAIN();
