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

#pragma once

// Data-parallel kernels. Each routine takes an Exec tag; Exec::serial is the
// reference implementation and Exec::parallel the OpenMP version. Both return
// bit-identical results: randomness is drawn from per-row engines and every
// output slot is written by exactly one iteration.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "evonet/graph.hpp"

namespace evonet::kernels {

enum class Exec { serial, parallel };

/// SplitMix64 finaliser; used to derive independent per-row seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Samples each pair u < v < n independently with probability prob(u, v).
/// Row u draws from an engine seeded by mix_seed(seed, u).
template <typename Prob>
std::vector<Edge> sample_independent_edges(int n, Prob&& prob, std::uint64_t seed, Exec exec) {
  std::vector<std::vector<Edge>> rows(n > 0 ? n : 0);
  auto fill_row = [&](int u) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(u)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto& row = rows[u];
    for (int v = u + 1; v < n; ++v)
      if (unit(rng) < prob(u, v)) row.push_back({u, v});
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int u = 0; u < n; ++u) fill_row(u);
  } else {
    for (int u = 0; u < n; ++u) fill_row(u);
  }
  std::vector<Edge> edges;
  for (auto& row : rows) edges.insert(edges.end(), row.begin(), row.end());
  return edges;
}

/// Sparse WL feature vector: compressed label -> count, over all rounds.
using LabelCounts = std::map<std::int64_t, std::int64_t>;

std::int64_t dot(const LabelCounts& a, const LabelCounts& b);

/// out[k] = f(k) for k in [0, count), evaluated serially or across threads.
template <typename F>
std::vector<double> map_indices(std::size_t count, F&& f, Exec exec) {
  std::vector<double> out(count);
  const auto n = static_cast<std::int64_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) out[k] = f(static_cast<std::size_t>(k));
  } else {
    for (std::int64_t k = 0; k < n; ++k) out[k] = f(static_cast<std::size_t>(k));
  }
  return out;
}

}  // namespace evonet::kernels
