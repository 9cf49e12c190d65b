// Copyright 2026 The EvoNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "evonet/baselines.hpp"
#include "evonet/eval.hpp"
#include "evonet/kernels.hpp"

using namespace evonet;
using kernels::Exec;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

std::vector<Graph> graph_pool(int count, int n) {
  std::vector<Graph> out;
  for (int i = 0; i < count; ++i) out.push_back(generate_er_p(n + i % 7, 0.08, 100 + i, Exec::serial));
  return out;
}

void BM_ErSampling(benchmark::State& state) {
  const auto exec = exec_of(state);
  const int n = static_cast<int>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_er_p(n, 0.01, seed++, exec));
  label(state);
}
BENCHMARK(BM_ErSampling)->ArgsProduct({{0, 1}, {1000, 4000}})->Unit(benchmark::kMillisecond);

void BM_KroneckerSampling(benchmark::State& state) {
  const auto exec = exec_of(state);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_kronecker(2048, {}, seed++, exec));
  label(state);
}
BENCHMARK(BM_KroneckerSampling)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_WlGram(benchmark::State& state) {
  const auto graphs = graph_pool(static_cast<int>(state.range(1)), 60);
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(wl_gram(graphs, {}, exec));
  label(state);
}
BENCHMARK(BM_WlGram)->ArgsProduct({{0, 1}, {32, 128}})->Unit(benchmark::kMillisecond);

void BM_PairwiseSimilarity(benchmark::State& state) {
  const auto pred = graph_pool(64, 200), truth = graph_pool(64, 210);
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_similarity(pred, truth, {}, exec));
  label(state);
}
BENCHMARK(BM_PairwiseSimilarity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// The Kron-Rand grid objective over all 21^3 initiators.
void BM_KroneckerGrid(benchmark::State& state) {
  const auto exec = exec_of(state);
  const int n = 300;
  for (auto _ : state) {
    auto obj = kernels::map_indices(
        21 * 21 * 21,
        [&](std::size_t idx) {
          const Initiator t{0.05 * static_cast<double>(idx / 441), 0.05 * static_cast<double>((idx / 21) % 21),
                            0.05 * static_cast<double>(idx % 21)};
          const auto m = kronecker_moments(t, n);
          return m.density + m.degree_variance;
        },
        exec);
    benchmark::DoNotOptimize(obj);
  }
  label(state);
}
BENCHMARK(BM_KroneckerGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
