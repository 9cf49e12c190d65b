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

#include "evonet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "evonet/errors.hpp"
#include "evonet/model.hpp"

namespace evonet {

BaselineKind parse_baseline_kind(const std::string& s) {
  if (s == "er") return BaselineKind::er;
  if (s == "sbm") return BaselineKind::sbm;
  if (s == "ba") return BaselineKind::ba;
  if (s == "power") return BaselineKind::power;
  if (s == "kron-rand" || s == "kron_rand") return BaselineKind::kron_rand;
  if (s == "kron-fix" || s == "kron_fix") return BaselineKind::kron_fix;
  throw ConfigError("unknown baseline kind: " + s);
}

std::string to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::er: return "er";
    case BaselineKind::sbm: return "sbm";
    case BaselineKind::ba: return "ba";
    case BaselineKind::power: return "power";
    case BaselineKind::kron_rand: return "kron-rand";
    case BaselineKind::kron_fix: return "kron-fix";
  }
  return "er";
}

const std::vector<BaselineKind>& all_baseline_kinds() {
  static const std::vector<BaselineKind> kinds = {BaselineKind::er,        BaselineKind::sbm,
                                                  BaselineKind::ba,        BaselineKind::power,
                                                  BaselineKind::kron_rand, BaselineKind::kron_fix};
  return kinds;
}

static double pairs(double n) { return n * (n - 1) / 2; }

static Graph finish(int n, std::vector<Edge> edges) {
  std::vector<NodeId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  return assign_degree_attributes(Graph(std::move(ids), std::move(edges)));
}

// ---- size estimation ----

SizeEstimator::SizeEstimator(int window, int hidden, std::uint64_t seed) : window_(window) {
  if (window < 1) throw ConfigError("size estimator window must be >= 1");
  if (hidden < 1) throw ConfigError("size estimator width must be >= 1");
  std::mt19937_64 rng(seed);
  mlp_ = nn::Mlp::create(store_, "estimator", {2 * window, hidden, hidden, 2}, rng);
}

SizePoint clamp_targets(double nodes, double edges) {
  const int n = std::max(1, static_cast<int>(std::llround(std::clamp(nodes, 1.0, 1e9))));
  const double cap = pairs(n);
  const int m = static_cast<int>(std::llround(std::clamp(edges, 0.0, std::min(cap, 2e9))));
  return {n, m};
}

void SizeEstimator::fit(std::span<const SizePoint> history, int iterations, double step_size) {
  scales_ = fit_size_scales(history);
  const auto w = static_cast<std::size_t>(window_);
  if (history.size() <= w) return;  // no windows: the zero-change fallback stands
  const auto count = static_cast<Eigen::Index>(history.size() - w);
  nn::Matrix x(2 * window_, count), y(2, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const auto win = history.subspan(k, w);
    x.col(k) = size_features(win, scales_);
    y(0, k) = (history[k + w].first - win.back().first) / scales_.nodes;
    y(1, k) = (history[k + w].second - win.back().second) / scales_.edges;
  }
  Optimizer opt(OptimizerKind::adam, step_size);
  for (int it = 0; it < iterations; ++it) {
    store_.zero_grad();
    ad::Tape tape;
    auto loss = ad::scale(ad::squared_error_sum(mlp_.forward(tape, tape.constant(x)), y),
                          1.0 / static_cast<double>(count));
    tape.backward(loss);
    opt.step(store_);
  }
}

SizePoint SizeEstimator::estimate(std::span<const SizePoint> window) const {
  if (window.size() != static_cast<std::size_t>(window_))
    throw DimensionError("size estimator window has the wrong length");
  const nn::Matrix out = mlp_.eval(size_features(window, scales_));
  return clamp_targets(window.back().first + scales_.nodes * out(0, 0),
                       window.back().second + scales_.edges * out(1, 0));
}

// ---- Erdos-Renyi ----

Graph generate_er_p(int n, double p, std::uint64_t seed, kernels::Exec exec) {
  if (n < 1) throw ConfigError("ER needs at least one node");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("ER probability outside [0,1]");
  return finish(n, kernels::sample_independent_edges(n, [p](int, int) { return p; }, seed, exec));
}

Graph generate_er(int n, long long m, std::uint64_t seed, kernels::Exec exec) {
  if (n < 1) throw ConfigError("ER needs at least one node");
  const double cap = pairs(n);
  if (m < 0 || static_cast<double>(m) > cap) throw ConfigError("ER edge count infeasible for n");
  return generate_er_p(n, cap == 0 ? 0.0 : static_cast<double>(m) / cap, seed, exec);
}

// ---- stochastic block model ----

static double graph_density(const Graph& g) {
  const double cap = pairs(g.num_nodes());
  return cap == 0 ? 0.0 : g.num_edges() / cap;
}

std::vector<double> fiedler_vector(const Graph& g, int iterations) {
  const int n = g.num_nodes();
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v(i) = static_cast<double>(kernels::mix_seed(0x5eed, i) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  int max_degree = 0;
  for (int i = 0; i < n; ++i) max_degree = std::max(max_degree, g.degree(i));
  const double shift = 2.0 * max_degree + 1.0;  // shift - L is positive definite
  auto deflate = [&](Eigen::VectorXd& x) {
    x.array() -= x.mean();
    const double norm = x.norm();
    if (norm > 0) x /= norm;
  };
  deflate(v);
  Eigen::VectorXd next(n);
  for (int it = 0; it < iterations && v.norm() > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      double lv = g.degree(i) * v(i);
      for (int j : g.neighbors()[i]) lv -= v(j);
      next(i) = shift * v(i) - lv;
    }
    deflate(next);
    const double change = (next - v).norm();
    v.swap(next);
    if (change < 1e-12) break;
  }
  return {v.data(), v.data() + n};
}

SbmFit fit_sbm(const Graph& history) {
  if (history.num_nodes() == 0) throw DataError("SBM history graph is empty");
  SbmFit fit;
  const int n = history.num_nodes();
  fit.density = graph_density(history);
  const auto f = fiedler_vector(history);
  fit.block.resize(n);
  int n0 = 0;
  for (int i = 0; i < n; ++i) {
    fit.block[i] = f[i] >= 0 ? 0 : 1;
    n0 += fit.block[i] == 0;
  }
  const int n1 = n - n0;
  fit.block0_fraction = static_cast<double>(n0) / n;
  if (n0 == 0 || n1 == 0) {
    fit.degenerate = true;
    return fit;
  }
  double e00 = 0, e11 = 0, e01 = 0;
  for (const auto& e : history.edges()) {
    const int a = fit.block[e.u], b = fit.block[e.v];
    if (a != b) e01 += 1;
    else if (a == 0) e00 += 1;
    else e11 += 1;
  }
  fit.p00 = n0 > 1 ? e00 / pairs(n0) : 0.0;
  fit.p11 = n1 > 1 ? e11 / pairs(n1) : 0.0;
  fit.p01 = e01 / (static_cast<double>(n0) * n1);
  return fit;
}

Graph sample_sbm(int n, const SbmFit& fit, std::uint64_t seed, kernels::Exec exec) {
  if (n < 1) throw ConfigError("SBM needs at least one node");
  if (fit.degenerate) return generate_er_p(n, fit.density, seed, exec);
  const int n0 = static_cast<int>(std::llround(fit.block0_fraction * n));
  auto prob = [&](int u, int v) {
    const bool bu = u >= n0, bv = v >= n0;
    if (bu != bv) return fit.p01;
    return bu ? fit.p11 : fit.p00;
  };
  return finish(n, kernels::sample_independent_edges(n, prob, seed, exec));
}

Graph generate_sbm(int n, const Graph& history, std::uint64_t seed, kernels::Exec exec) {
  return sample_sbm(n, fit_sbm(history), seed, exec);
}

// ---- preferential attachment ----

Graph generate_ba(int n, int m_per_node, std::uint64_t seed, BaVariant variant) {
  if (n < 3) throw ConfigError("preferential attachment needs n >= 3");
  if (m_per_node < 1) throw ConfigError("preferential attachment needs m_per_node >= 1");
  constexpr double kClosure = 0.1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<int>> adj(n);
  std::vector<int> endpoints;  // each edge contributes both ends: uniform pick ~ degree
  std::vector<Edge> edges;
  auto link = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
    endpoints.push_back(a);
    endpoints.push_back(b);
    edges.push_back({std::min(a, b), std::max(a, b)});
  };
  link(0, 1);
  link(1, 2);
  link(0, 2);
  for (int v = 3; v < n; ++v) {
    const auto existing_endpoints = endpoints.size();
    std::unordered_set<int> chosen;
    const int want = std::min(m_per_node, v);
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < want) {
      std::uniform_int_distribution<std::size_t> pick(0, existing_endpoints - 1);
      const int t = endpoints[pick(rng)];
      if (chosen.insert(t).second) targets.push_back(t);
    }
    for (int t : targets) {
      if (std::find(adj[v].begin(), adj[v].end(), t) == adj[v].end()) link(v, t);
      if (variant == BaVariant::power && unit(rng) < kClosure) {
        std::vector<int> options;
        for (int x : adj[t])
          if (x != v && std::find(adj[v].begin(), adj[v].end(), x) == adj[v].end()) options.push_back(x);
        if (!options.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
          const int x = options[pick(rng)];
          link(v, x);
          chosen.insert(x);
        }
      }
    }
  }
  return finish(n, std::move(edges));
}

// ---- stochastic Kronecker ----

int kronecker_power(int n) {
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

double kronecker_probability(const Initiator& theta, int k, int u, int v) {
  double p = 1.0;
  for (int b = 0; b < k; ++b) p *= theta.at((u >> b) & 1, (v >> b) & 1);
  return p;
}

double kronecker_expected_degree(const Initiator& theta, int k, int n, int u) {
  // Sum_{v < n} prod_b theta[u_b][v_b]: walk n's bits from the top; each set
  // bit b admits all v that match n above b, have 0 at b, and are free below.
  std::vector<double> free_below(k + 1, 1.0);
  for (int b = 0; b < k; ++b) {
    const int ub = (u >> b) & 1;
    free_below[b + 1] = free_below[b] * (theta.at(ub, 0) + theta.at(ub, 1));
  }
  double total = 0.0;
  if ((1LL << k) == n) {
    total = free_below[k];
  } else {
    double prefix = 1.0;
    for (int b = k - 1; b >= 0; --b) {
      const int ub = (u >> b) & 1;
      const int nb = (n >> b) & 1;
      if (nb == 1) total += prefix * theta.at(ub, 0) * free_below[b];
      prefix *= theta.at(ub, nb);
    }
  }
  return total - kronecker_probability(theta, k, u, u);
}

KroneckerMoments kronecker_moments(const Initiator& theta, int n) {
  KroneckerMoments m;
  if (n < 2) return m;
  const int k = kronecker_power(n);
  double sum = 0, sum_sq = 0;
  for (int u = 0; u < n; ++u) {
    const double d = kronecker_expected_degree(theta, k, n, u);
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / n;
  m.density = sum / (static_cast<double>(n) * (n - 1));
  m.degree_variance = std::max(0.0, sum_sq / n - mean * mean);
  return m;
}

Initiator fit_kronecker(const Graph& history) {
  const int n = history.num_nodes();
  if (n < 2) throw DataError("Kronecker fit needs a snapshot with >= 2 nodes");
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    sum += history.degree(i);
    sum_sq += static_cast<double>(history.degree(i)) * history.degree(i);
  }
  const double target_density = graph_density(history);
  const double target_variance = std::max(0.0, sum_sq / n - (sum / n) * (sum / n));
  constexpr int kSteps = 21;  // 0, 0.05, ..., 1
  auto grid = [](std::size_t i) { return static_cast<double>(i) * 0.05; };
  const auto objective = kernels::map_indices(
      kSteps * kSteps * kSteps,
      [&](std::size_t idx) {
        const Initiator theta{grid(idx / (kSteps * kSteps)), grid((idx / kSteps) % kSteps), grid(idx % kSteps)};
        const auto m = kronecker_moments(theta, n);
        return std::abs(m.density - target_density) + std::abs(m.degree_variance - target_variance);
      },
      kernels::Exec::parallel);
  const auto best = static_cast<std::size_t>(
      std::min_element(objective.begin(), objective.end()) - objective.begin());
  return {grid(best / (kSteps * kSteps)), grid((best / kSteps) % kSteps), grid(best % kSteps)};
}

Graph generate_kronecker(int n, const Initiator& theta, std::uint64_t seed, kernels::Exec exec) {
  if (n < 2) throw ConfigError("Kronecker graph needs n >= 2");
  for (double x : {theta.a, theta.b, theta.c})
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("initiator entry outside [0,1]");
  const int k = kronecker_power(n);
  return finish(n, kernels::sample_independent_edges(
                       n, [&](int u, int v) { return kronecker_probability(theta, k, u, v); }, seed,
                       exec));
}

Graph generate_baseline(BaselineKind kind, SizePoint target, const Graph& history,
                        std::uint64_t seed) {
  const int n = std::max(1, target.first);
  const long long m = std::clamp<long long>(target.second, 0, static_cast<long long>(pairs(n)));
  switch (kind) {
    case BaselineKind::er: return generate_er(n, m, seed);
    case BaselineKind::sbm: return generate_sbm(n, history, seed);
    case BaselineKind::ba:
    case BaselineKind::power: {
      const int size = std::max(3, n);
      const int per_node = std::max(1, static_cast<int>(std::llround(static_cast<double>(m) / size)));
      return generate_ba(size, per_node, seed, kind == BaselineKind::ba ? BaVariant::ba : BaVariant::power);
    }
    case BaselineKind::kron_rand: return generate_kronecker(std::max(2, n), fit_kronecker(history), seed);
    case BaselineKind::kron_fix: return generate_kronecker(std::max(2, n), Initiator{}, seed);
  }
  throw ConfigError("unknown baseline kind");
}

}  // namespace evonet
