#include <benchmark/benchmark.h>

#include <random>

#include "colcirc/codec.hpp"
#include "colcirc/synth.hpp"

namespace {

using namespace colcirc;

constexpr std::size_t kRows = 1 << 18;

Column sample_for(const std::string& id) {
  synth::Rng rng(3);
  if (id.rfind("run.", 0) == 0) return synth::runs(rng, kRows, ElementType::u(32), 16.0, 1000);
  if (id.rfind("dict", 0) == 0 || id == "cascade") return synth::zipf(rng, kRows, ElementType::u(32), 500, 1.2);
  return synth::noisy_linear(rng, kRows, ElementType::i(64), 100000, 3, 60);
}

json params_for(const std::string& id) {
  if (id == "cascade") return {{"bits", {4, 8, 10}}};
  return json::object();
}

const char* const kSchemes[] = {"run.rle", "run.rpe", "dict", "dict.monotone", "cascade",
                                "for",     "delta",   "delta.patched", "nullsup", "noisy.generated"};

void BM_Encode(benchmark::State& state) {
  std::string id = kSchemes[state.range(0)];
  auto col = sample_for(id);
  for (auto _ : state) benchmark::DoNotOptimize(encode(id, params_for(id), col));
  state.SetLabel(id);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kRows));
}

void BM_Decode(benchmark::State& state) {
  std::string id = kSchemes[state.range(0)];
  auto inst = encode(id, params_for(id), sample_for(id));
  for (auto _ : state) benchmark::DoNotOptimize(decode(inst));
  state.SetLabel(id + " ratio " + std::to_string(compression_ratio(inst).value()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kRows));
}

void BM_Verify(benchmark::State& state) {
  std::string id = kSchemes[state.range(0)];
  auto inst = encode(id, params_for(id), sample_for(id));
  for (auto _ : state) benchmark::DoNotOptimize(verify(inst));
  state.SetLabel(id);
}

constexpr int kCount = static_cast<int>(std::size(kSchemes));
BENCHMARK(BM_Encode)->DenseRange(0, kCount - 1);
BENCHMARK(BM_Decode)->DenseRange(0, kCount - 1);
BENCHMARK(BM_Verify)->DenseRange(0, kCount - 1);

}  // namespace

BENCHMARK_MAIN();
