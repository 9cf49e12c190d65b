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

// Independent reference implementations used as test oracles.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "evonet/autodiff.hpp"
#include "evonet/graph.hpp"
#include "evonet/nn.hpp"

namespace evonet::testing {

inline Graph random_graph(int n, double p, std::mt19937_64& rng, NodeId id_base = 0) {
  std::bernoulli_distribution coin(p);
  std::vector<NodeId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = id_base + i;
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  return assign_degree_attributes(Graph(ids, edges));
}

inline Graph make_graph(int n, std::vector<Edge> edges) {
  std::vector<NodeId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  return Graph(ids, std::move(edges));
}

inline Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return make_graph(n, e);
}

inline Graph cycle_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, n - 1});
  return make_graph(n, e);
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Subtree patterns as literal nested strings: round r label of v is
// "(" + label_{r-1}(v) + ":" + sorted neighbour labels_{r-1} joined by "," + ")".
// The kernel is the number of equal (round, pattern) pairs across the graphs.
inline std::vector<std::map<std::string, long long>> subtree_patterns(const Graph& g, int h) {
  std::vector<std::string> labels(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) labels[v] = std::to_string(g.degree(v));
  std::vector<std::map<std::string, long long>> rounds;
  for (int r = 0; r <= h; ++r) {
    if (r > 0) {
      std::vector<std::string> next(labels.size());
      for (int v = 0; v < g.num_nodes(); ++v) {
        std::vector<std::string> nb;
        for (int u : g.neighbors()[v]) nb.push_back(labels[u]);
        std::sort(nb.begin(), nb.end());
        std::string s = "(" + labels[v] + ":";
        for (std::size_t k = 0; k < nb.size(); ++k) s += (k ? "," : "") + nb[k];
        next[v] = s + ")";
      }
      labels.swap(next);
    }
    std::map<std::string, long long> counts;
    for (const auto& l : labels) ++counts[l];
    rounds.push_back(std::move(counts));
  }
  return rounds;
}

inline long long brute_force_wl(const Graph& a, const Graph& b, int h) {
  const auto pa = subtree_patterns(a, h), pb = subtree_patterns(b, h);
  long long total = 0;
  for (int r = 0; r <= h; ++r)
    for (const auto& [pattern, ca] : pa[r]) {
      auto it = pb[r].find(pattern);
      if (it != pb[r].end()) total += ca * it->second;
    }
  return total;
}

inline double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Central finite differences against the tape gradient for every entry of
// every named parameter. A pair passes when |a - n| <= rel * max(|a|, |n|)
// or both sit below `floor` (entries whose true gradient is ~0).
struct GradCheck {
  double worst_relative = 0;
  std::size_t checked = 0;
  std::size_t failures = 0;
};

inline GradCheck check_gradients(nn::ParamStore& store, const std::function<ad::Var(ad::Tape&)>& loss,
                                 double step = 1e-5, double rel = 1e-4, double floor = 1e-7) {
  store.zero_grad();
  {
    ad::Tape tape;
    tape.backward(loss(tape));
  }
  GradCheck out;
  for (auto& [name, p] : store.entries()) {
    const Eigen::MatrixXd analytic = p.grad;
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      const double orig = p.value.data()[i];
      p.value.data()[i] = orig + step;
      ad::Tape t1;
      const double up = loss(t1).value()(0, 0);
      p.value.data()[i] = orig - step;
      ad::Tape t2;
      const double down = loss(t2).value()(0, 0);
      p.value.data()[i] = orig;
      const double numeric = (up - down) / (2 * step);
      const double a = analytic.data()[i];
      const double scale = std::max(std::abs(a), std::abs(numeric));
      ++out.checked;
      if (scale < floor) continue;
      const double r = std::abs(a - numeric) / scale;
      out.worst_relative = std::max(out.worst_relative, r);
      if (r > rel) ++out.failures;
    }
  }
  return out;
}

}  // namespace evonet::testing
