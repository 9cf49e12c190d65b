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

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <random>

#include "evonet/errors.hpp"
#include "evonet/eval.hpp"
#include "support.hpp"

using namespace evonet;
using evonet::testing::make_graph;
using evonet::testing::random_graph;

namespace {

Graph with_attr(const Graph& g, std::vector<double> values) {
  Eigen::MatrixXd a(g.num_nodes(), 1);
  for (int i = 0; i < g.num_nodes(); ++i) a(i, 0) = values[i];
  return g.with_attrs(a, Eigen::MatrixXd(g.num_edges(), 0));
}

}  // namespace

TEST(Wl, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  for (int pair = 0; pair < 200; ++pair) {
    const auto a = random_graph(size(rng), dens(rng), rng);
    const auto b = random_graph(size(rng), dens(rng), rng);
    for (int h : {0, 1, 2, 3}) {
      const WLConfig cfg{h};
      ASSERT_EQ(wl_kernel_count(a, b, cfg), evonet::testing::brute_force_wl(a, b, h)) << pair << " h=" << h;
    }
  }
}

TEST(Wl, PathVersusTriangle) {
  const auto p3 = evonet::testing::path_graph(3);
  const auto c3 = evonet::testing::cycle_graph(3);
  const WLConfig cfg{1};
  const double k12 = evonet::testing::brute_force_wl(p3, c3, 1);
  const double k11 = evonet::testing::brute_force_wl(p3, p3, 1);
  const double k22 = evonet::testing::brute_force_wl(c3, c3, 1);
  EXPECT_DOUBLE_EQ(wl_subtree_kernel(p3, c3, cfg), k12 / std::sqrt(k11 * k22));
  // Degree labels {1,2,1} and {2,2,2} share the single middle node at round 0.
  EXPECT_EQ(k12, 3);
  EXPECT_EQ(k11, 5 + 5);
  EXPECT_EQ(k22, 9 + 9);
}

TEST(Wl, SelfSimilarityAndPermutation) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const auto g = random_graph(1 + i % 12, 0.4, rng);
    EXPECT_NEAR(wl_subtree_kernel(g, g), 1.0, 1e-12);
    const auto perm = evonet::testing::random_permutation(g.num_nodes(), rng);
    EXPECT_NEAR(wl_subtree_kernel(g, assign_degree_attributes(g.permuted(perm))), 1.0, 1e-12);
  }
}

TEST(Wl, SymmetricAndBounded) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_graph(2 + i % 9, 0.3, rng), b = random_graph(3 + i % 7, 0.6, rng);
    const double ab = wl_subtree_kernel(a, b), ba = wl_subtree_kernel(b, a);
    EXPECT_DOUBLE_EQ(ab, ba);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(Wl, ZeroIterationsIsDegreeHistogramCosine) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) {
    const auto a = random_graph(3 + i % 8, 0.5, rng), b = random_graph(2 + i % 10, 0.3, rng);
    std::map<int, double> ha, hb;
    for (int v = 0; v < a.num_nodes(); ++v) ha[a.degree(v)] += 1;
    for (int v = 0; v < b.num_nodes(); ++v) hb[b.degree(v)] += 1;
    double dot = 0, na = 0, nb = 0;
    for (auto [d, c] : ha) {
      na += c * c;
      if (hb.contains(d)) dot += c * hb[d];
    }
    for (auto [d, c] : hb) nb += c * c;
    EXPECT_NEAR(wl_subtree_kernel(a, b, WLConfig{0}), dot / std::sqrt(na * nb), 1e-12);
  }
}

TEST(Wl, GramIsPositiveSemidefinite) {
  std::mt19937_64 rng(8);
  std::vector<Graph> graphs;
  for (int i = 0; i < 10; ++i) graphs.push_back(random_graph(2 + i, 0.4, rng));
  const auto gram = wl_gram(graphs);
  EXPECT_TRUE(gram.isApprox(gram.transpose()));
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(gram(i, i), 1.0, 1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().minCoeff(), -1e-8);
  EXPECT_EQ(wl_gram(graphs, {}, kernels::Exec::serial), gram);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) EXPECT_NEAR(gram(i, j), wl_subtree_kernel(graphs[i], graphs[j]), 1e-12);
}

TEST(Wl, BinnedAttributeLabels) {
  const auto g = make_graph(3, {{0, 1}, {1, 2}});
  const WLConfig cfg{0, LabelRule::binned_attribute, 0.5};
  EXPECT_EQ(initial_labels(with_attr(g, {0.1, 0.3, 1.4}), cfg), (std::vector<std::int64_t>{0, 1, 3}));
  EXPECT_EQ(initial_labels(with_attr(g, {-0.3, 0.0, 0.26}), cfg), (std::vector<std::int64_t>{-1, 0, 1}));
  EXPECT_EQ(initial_labels(g, WLConfig{}), (std::vector<std::int64_t>{1, 2, 1}));
  EXPECT_THROW(initial_labels(g.with_attrs({}, {}), cfg), DataError);
  EXPECT_THROW(initial_labels(g, WLConfig{-1}), ConfigError);
  EXPECT_THROW(initial_labels(with_attr(g, {0, 0, 0}), WLConfig{1, LabelRule::binned_attribute, 0.0}), ConfigError);
  EXPECT_EQ(parse_label_rule(to_string(LabelRule::binned_attribute)), LabelRule::binned_attribute);
}

TEST(Wl, EmptyGraphRejected) {
  const Graph empty;
  EXPECT_THROW(wl_subtree_kernel(empty, make_graph(2, {{0, 1}})), DataError);
}

TEST(Report, Arithmetic) {
  const auto r = summarize_similarities({0.5, 1.0});
  EXPECT_DOUBLE_EQ(r.mean, 0.75);
  EXPECT_DOUBLE_EQ(r.p90, 1.0);
  EXPECT_EQ(r.histogram[10], 1);
  EXPECT_EQ(r.histogram[19], 1);
  const auto c = summarize_similarities(std::vector<double>(7, 1.0));
  EXPECT_DOUBLE_EQ(c.mean, 1.0);
  EXPECT_DOUBLE_EQ(c.p90, 1.0);
  EXPECT_EQ(c.histogram[19], 7);
  EXPECT_THROW(summarize_similarities({}), DataError);
  EXPECT_THROW(summarize_similarities({0.2, 1.5}), NumericError);
}

TEST(Report, NearestRankPercentile) {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
  EXPECT_DOUBLE_EQ(summarize_similarities(v).p90, 0.9);
  v.push_back(0.0);
  EXPECT_DOUBLE_EQ(summarize_similarities(v).p90, 0.9);  // rank ceil(9.9) = 10 of 11
  int total = 0;
  for (int c : summarize_similarities(v).histogram) total += c;
  EXPECT_EQ(total, 11);
}

TEST(Report, JsonRoundTripAndPairing) {
  const auto p3 = evonet::testing::path_graph(3);
  const auto c3 = evonet::testing::cycle_graph(3);
  const std::vector<Graph> pred = {p3, c3}, truth = {p3, p3};
  const auto r = similarity_report(pred, truth);
  EXPECT_DOUBLE_EQ(r.similarities[0], 1.0);
  EXPECT_DOUBLE_EQ(r.similarities[1], wl_subtree_kernel(c3, p3));
  const auto back = KernelReport::from_json(r.to_json());
  EXPECT_EQ(back.similarities, r.similarities);
  EXPECT_EQ(back.histogram, r.histogram);
  EXPECT_EQ(back.to_json().dump(), r.to_json().dump());
  EXPECT_THROW(similarity_report(pred, std::span(truth).first(1)), DataError);
}

TEST(SizeCurveTest, ErrorsAndCsv) {
  const std::vector<Graph> pred = {make_graph(3, {}), make_graph(7, {})};
  const std::vector<Graph> truth = {make_graph(3, {}), make_graph(4, {})};
  const std::vector<std::size_t> steps = {8, 9};
  const auto c = size_curve(pred, truth, steps);
  EXPECT_DOUBLE_EQ(c.mean_abs_error(), 1.5);
  EXPECT_EQ(c.max_abs_error(), 3);
  EXPECT_DOUBLE_EQ(c.fraction_within(2), 0.5);
  EXPECT_EQ(c.to_csv(), "step,predicted_nodes,true_nodes,abs_error\n8,3,3,0\n9,7,4,3\n");
}

TEST(Pca, CollinearPointsNeedOneComponent) {
  std::vector<Eigen::VectorXd> pts;
  const Eigen::Vector3d dir = Eigen::Vector3d(1, 2, 2) / 3.0;
  for (int i = 0; i < 9; ++i) pts.push_back(Eigen::Vector3d(1, 0, -1) + (i - 4) * dir);
  const auto r = pca_project(pts);
  EXPECT_NEAR(r.explained[0], 1.0, 1e-12);
  EXPECT_NEAR(r.explained[1], 0.0, 1e-12);
  for (int i = 0; i < 9; ++i) {
    EXPECT_NEAR(std::abs(r.points[i][0]), std::abs(i - 4.0), 1e-9);
    EXPECT_NEAR(r.points[i][1], 0.0, 1e-9);
  }
}

TEST(Pca, PlanarInputKeepsDistances) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd basis = Eigen::MatrixXd::NullaryExpr(6, 2, [&] { return gauss(rng); });
  basis = Eigen::HouseholderQR<Eigen::MatrixXd>(basis).householderQ() * Eigen::MatrixXd::Identity(6, 2);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(basis * Eigen::Vector2d(3 * gauss(rng), gauss(rng)));
  const auto r = pca_project(pts);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double dx = r.points[i][0] - r.points[j][0], dy = r.points[i][1] - r.points[j][1];
      EXPECT_NEAR(std::hypot(dx, dy), (pts[i] - pts[j]).norm(), 1e-9);
    }
  EXPECT_NEAR(r.explained[0] + r.explained[1], 1.0, 1e-12);
}

TEST(Pca, ReconstructionErrorEqualsDiscardedSpectrum) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 30; ++i) {
    Eigen::VectorXd v(5);
    for (int k = 0; k < 5; ++k) v(k) = gauss(rng) * (5 - k);
    pts.push_back(v);
  }
  const auto r = pca_project(pts);
  double err = 0;
  for (int i = 0; i < 30; ++i) {
    const Eigen::VectorXd rec = r.mean + r.components * Eigen::Vector2d(r.points[i][0], r.points[i][1]);
    err += (pts[i] - rec).squaredNorm();
  }
  EXPECT_NEAR(err / 29, r.eigenvalues.tail(3).sum(), 1e-9);
  EXPECT_TRUE((r.components.transpose() * r.components).isApprox(Eigen::Matrix2d::Identity(), 1e-12));
  for (int k = 1; k < 5; ++k) EXPECT_GE(r.eigenvalues(k - 1), r.eigenvalues(k));
}

TEST(Pca, ZeroVarianceAndErrors) {
  const std::vector<Eigen::VectorXd> same(4, Eigen::Vector3d(1, 2, 3));
  const auto r = pca_project(same);
  for (const auto& p : r.points) {
    EXPECT_EQ(p[0], 0.0);
    EXPECT_EQ(p[1], 0.0);
  }
  EXPECT_THROW(pca_project(std::vector<Eigen::VectorXd>(1, Eigen::Vector3d::Zero())), DataError);
  const std::vector<Eigen::VectorXd> mixed = {Eigen::Vector3d::Zero(), Eigen::Vector2d::Zero()};
  EXPECT_THROW(pca_project(mixed), DimensionError);
}
