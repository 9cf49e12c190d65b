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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "evonet/baselines.hpp"
#include "evonet/errors.hpp"
#include "evonet/synthetic.hpp"
#include "support.hpp"

using namespace evonet;
using evonet::testing::make_graph;

namespace {

double density(const Graph& g) {
  const double n = g.num_nodes();
  return n < 2 ? 0.0 : g.num_edges() / (n * (n - 1) / 2);
}

int max_degree(const Graph& g) {
  int d = 0;
  for (int v = 0; v < g.num_nodes(); ++v) d = std::max(d, g.degree(v));
  return d;
}

Graph clique_pair(int k, bool bridge) {
  std::vector<Edge> edges;
  for (int off : {0, k})
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) edges.push_back({off + i, off + j});
  if (bridge) edges.push_back({0, k});
  return make_graph(2 * k, edges);
}

void expect_valid(const Graph& g, int n) {
  EXPECT_EQ(g.num_nodes(), n);
  for (const auto& e : g.edges()) EXPECT_LT(e.u, e.v);
  for (int v = 0; v < n; ++v) EXPECT_EQ(g.node_attrs()(v, 0), g.degree(v));
}

}  // namespace

TEST(Kinds, ParseBothSpellings) {
  EXPECT_EQ(parse_baseline_kind("kron-rand"), BaselineKind::kron_rand);
  EXPECT_EQ(parse_baseline_kind("kron_fix"), BaselineKind::kron_fix);
  for (auto k : all_baseline_kinds()) EXPECT_EQ(parse_baseline_kind(to_string(k)), k);
  EXPECT_THROW(parse_baseline_kind("ws"), ConfigError);
}

TEST(Estimator, ClampsIntoSimpleGraphRange) {
  EXPECT_EQ(clamp_targets(-4.0, -2.0), SizePoint(1, 0));
  EXPECT_EQ(clamp_targets(4.2, 100.0), SizePoint(4, 6));
  EXPECT_EQ(clamp_targets(10.0, 7.4), SizePoint(10, 7));
}

TEST(Estimator, LinearGrowthWithinOne) {
  const auto seq = gen_path_sequence(80, GrowthMode::grow);
  std::vector<SizePoint> history;
  for (const auto& g : seq.graphs) history.emplace_back(g.num_nodes(), g.num_edges());
  SizeEstimator est(10, 32, 11);
  est.fit(std::span(history).first(64));
  for (std::size_t t = 64; t < history.size(); ++t) {
    const auto got = est.estimate(std::span(history).subspan(t - 10, 10));
    EXPECT_LE(std::abs(got.first - history[t].first), 1) << t;
    EXPECT_LE(std::abs(got.second - history[t].second), 1) << t;
  }
  EXPECT_THROW(est.estimate(std::span(history).first(3)), DimensionError);
}

TEST(Er, EdgeCountConcentration) {
  int inside = 0;
  constexpr int kSeeds = 200;
  for (int s = 0; s < kSeeds; ++s) {
    const auto g = generate_er(100, 495, s);
    expect_valid(g, 100);
    inside += std::abs(g.num_edges() - 495) <= 63;
  }
  EXPECT_GE(inside, 0.99 * kSeeds);
}

TEST(Er, DegenerateProbabilities) {
  EXPECT_EQ(generate_er(20, 0, 1).num_edges(), 0);
  EXPECT_EQ(generate_er(20, 190, 1).num_edges(), 190);
  EXPECT_EQ(generate_er_p(7, 1.0, 3).num_edges(), 21);
  EXPECT_EQ(generate_er(1, 0, 1).num_nodes(), 1);
  EXPECT_THROW(generate_er(20, 191, 1), ConfigError);
  EXPECT_THROW(generate_er(20, -1, 1), ConfigError);
  EXPECT_THROW(generate_er_p(5, 1.5, 1), ConfigError);
}

TEST(Er, DensityAtThousandNodes) {
  const long long m = static_cast<long long>(0.01 * 1000 * 999 / 2);
  const auto g = generate_er(1000, m, 5);
  EXPECT_NEAR(density(g), 0.01, 0.001);
}

TEST(Sbm, RecoversPlantedCliques) {
  const auto fit = fit_sbm(clique_pair(6, false));
  EXPECT_FALSE(fit.degenerate);
  EXPECT_DOUBLE_EQ(fit.block0_fraction, 0.5);
  EXPECT_DOUBLE_EQ(fit.p00, 1.0);
  EXPECT_DOUBLE_EQ(fit.p11, 1.0);
  EXPECT_DOUBLE_EQ(fit.p01, 0.0);
  for (int v = 1; v < 6; ++v) EXPECT_EQ(fit.block[v], fit.block[0]);
  for (int v = 6; v < 12; ++v) EXPECT_NE(fit.block[v], fit.block[0]);
  const auto g = generate_sbm(20, clique_pair(6, false), 3);
  expect_valid(g, 20);
  EXPECT_EQ(g.num_edges(), 2 * 45);
  for (const auto& e : g.edges()) EXPECT_EQ(e.u < 10, e.v < 10);
}

TEST(Sbm, UniformHistoryMatchesErDensity) {
  std::mt19937_64 rng(9);
  const auto history = evonet::testing::random_graph(100, 0.1, rng);
  double total = 0;
  for (int s = 0; s < 10; ++s) total += density(generate_sbm(100, history, s));
  EXPECT_NEAR(total / 10, density(history), 0.1 * density(history));
}

TEST(Sbm, TwoNodesUseFittedCrossProbability) {
  const auto history = clique_pair(4, true);
  const auto fit = fit_sbm(history);
  ASSERT_DOUBLE_EQ(fit.p01, 1.0 / 16);
  int hits = 0;
  constexpr int kSeeds = 4000;
  for (int s = 0; s < kSeeds; ++s) hits += generate_sbm(2, history, s).num_edges();
  const double sigma = std::sqrt(fit.p01 * (1 - fit.p01) / kSeeds);
  EXPECT_NEAR(static_cast<double>(hits) / kSeeds, fit.p01, 4 * sigma);
}

TEST(Sbm, DegenerateFallsBackToEr) {
  EXPECT_TRUE(fit_sbm(make_graph(1, {})).degenerate);
  SbmFit fit;
  fit.degenerate = true;
  fit.density = 0.3;
  EXPECT_TRUE(sample_sbm(40, fit, 9) == generate_er_p(40, 0.3, 9));
  EXPECT_EQ(generate_sbm(5, make_graph(5, {}), 1).num_edges(), 0);
  EXPECT_THROW(fit_sbm(Graph()), DataError);
}

TEST(Ba, TriangleSeed) {
  const auto g = generate_ba(3, 2, 1);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_THROW(generate_ba(2, 1, 1), ConfigError);
  EXPECT_THROW(generate_ba(10, 0, 1), ConfigError);
}

TEST(Ba, ExactEdgeCount) {
  for (int m : {1, 2, 3})
    for (int n : {3, 4, 10, 200})
      for (int s = 0; s < 3; ++s) {
        const auto g = generate_ba(n, m, s);
        expect_valid(g, n);
        EXPECT_EQ(g.num_edges(), 3 + (n - 3) * m) << n << " " << m;
      }
}

TEST(Ba, HeavierTailThanEr) {
  int wins = 0;
  for (int s = 0; s < 20; ++s) {
    const auto ba = generate_ba(2000, 2, s);
    const auto er = generate_er(2000, ba.num_edges(), 1000 + s);
    wins += max_degree(ba) > max_degree(er);
  }
  EXPECT_GE(wins, 19);
}

TEST(Ba, PowerVariantAddsTriads) {
  const auto ba = generate_ba(500, 2, 4, BaVariant::ba);
  const auto pw = generate_ba(500, 2, 4, BaVariant::power);
  expect_valid(pw, 500);
  EXPECT_GT(pw.num_edges(), ba.num_edges());
}

TEST(Kronecker, OnesGiveCompleteGraph) {
  const auto g = generate_kronecker(4, {1, 1, 1}, 1);
  EXPECT_EQ(g.num_edges(), 6);
  EXPECT_EQ(generate_kronecker(11, {1, 1, 1}, 2).num_edges(), 55);
}

TEST(Kronecker, IdentityHasNoEdges) {
  EXPECT_EQ(generate_kronecker(16, {1, 0, 1}, 1).num_edges(), 0);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) EXPECT_EQ(kronecker_probability({1, 0, 1}, 3, u, v), u == v ? 1.0 : 0.0);
}

TEST(Kronecker, PowerAndErrors) {
  EXPECT_EQ(kronecker_power(2), 1);
  EXPECT_EQ(kronecker_power(4), 2);
  EXPECT_EQ(kronecker_power(5), 3);
  EXPECT_THROW(generate_kronecker(1, {}, 1), ConfigError);
  EXPECT_THROW(generate_kronecker(4, {1.2, 0.5, 0.1}, 1), ConfigError);
}

TEST(Kronecker, ExpectedDegreeMatchesBruteForce) {
  const Initiator theta{0.8, 0.35, 0.15};
  for (int n : {2, 3, 5, 8, 13, 16, 21}) {
    const int k = kronecker_power(n);
    for (int u = 0; u < n; ++u) {
      double brute = 0;
      for (int v = 0; v < n; ++v)
        if (v != u) {
          double p = 1;
          for (int b = 0; b < k; ++b) p *= theta.at((u >> b) & 1, (v >> b) & 1);
          brute += p;
        }
      EXPECT_NEAR(kronecker_expected_degree(theta, k, n, u), brute, 1e-12) << n << " " << u;
    }
  }
}

TEST(Kronecker, EdgeCountWithinThreeSigma) {
  const Initiator theta{0.9, 0.5, 0.1};
  const int n = 64, k = 6;
  // Full power: sum over all ordered pairs is (a + 2b + c)^k; drop the diagonal and halve.
  double diag = 0, var = 0;
  for (int u = 0; u < n; ++u) diag += kronecker_probability(theta, k, u, u);
  const double mean = (std::pow(theta.a + 2 * theta.b + theta.c, k) - diag) / 2;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const double p = kronecker_probability(theta, k, u, v);
      var += p * (1 - p);
    }
  for (int s = 0; s < 5; ++s) {
    const auto g = generate_kronecker(n, theta, s);
    EXPECT_LE(std::abs(g.num_edges() - mean), 3 * std::sqrt(var)) << s;
  }
}

TEST(Kronecker, FitIsGridArgmin) {
  std::mt19937_64 rng(3);
  const auto history = generate_kronecker(40, {0.85, 0.45, 0.2}, 8);
  const int n = history.num_nodes();
  double sum = 0, sq = 0;
  for (int v = 0; v < n; ++v) {
    sum += history.degree(v);
    sq += history.degree(v) * history.degree(v);
  }
  const double dens = density(history), var = sq / n - (sum / n) * (sum / n);
  double best = 1e300;
  Initiator arg;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j)
      for (int l = 0; l <= 20; ++l) {
        const Initiator t{i * 0.05, j * 0.05, l * 0.05};
        const auto m = kronecker_moments(t, n);
        const double obj = std::abs(m.density - dens) + std::abs(m.degree_variance - var);
        if (obj < best) best = obj, arg = t;
      }
  EXPECT_EQ(fit_kronecker(history), arg);
}

TEST(Baselines, SeedDeterminismAndExecEquivalence) {
  const auto history = clique_pair(5, true);
  for (auto kind : all_baseline_kinds()) {
    const auto a = generate_baseline(kind, {14, 30}, history, 77);
    const auto b = generate_baseline(kind, {14, 30}, history, 77);
    EXPECT_TRUE(a == b) << to_string(kind);
    expect_valid(a, 14);
  }
  using kernels::Exec;
  EXPECT_TRUE(generate_er(300, 4000, 5, Exec::serial) == generate_er(300, 4000, 5, Exec::parallel));
  EXPECT_TRUE(generate_sbm(120, history, 5, Exec::serial) == generate_sbm(120, history, 5, Exec::parallel));
  EXPECT_TRUE(generate_kronecker(100, {}, 5, Exec::serial) == generate_kronecker(100, {}, 5, Exec::parallel));
}

TEST(Baselines, SizesRaisedToGeneratorMinimum) {
  const auto history = clique_pair(3, false);
  EXPECT_EQ(generate_baseline(BaselineKind::ba, {1, 0}, history, 1).num_nodes(), 3);
  EXPECT_EQ(generate_baseline(BaselineKind::kron_fix, {1, 0}, history, 1).num_nodes(), 2);
  EXPECT_EQ(generate_baseline(BaselineKind::er, {1, 0}, history, 1).num_nodes(), 1);
}
