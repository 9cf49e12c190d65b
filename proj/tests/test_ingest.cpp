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

#include <cstdlib>
#include <set>
#include <sstream>

#include "evonet/errors.hpp"
#include "evonet/ingest.hpp"

using namespace evonet;

namespace {

EdgeStream parse(const std::string& text, EdgeFormat f = EdgeFormat::btc) {
  std::istringstream in(text);
  return parse_edge_stream(in, f);
}

EdgeStream uniform_stream(int count) {
  std::ostringstream out;
  for (int k = 1; k <= count; ++k) out << k << ',' << k + 1000 << ',' << (k % 3) - 1 << ',' << k << '\n';
  return parse(out.str());
}

std::set<std::pair<NodeId, NodeId>> id_edges(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> s;
  for (const auto& e : g.edges()) {
    auto a = g.node_ids()[e.u], b = g.node_ids()[e.v];
    s.insert({std::min(a, b), std::max(a, b)});
  }
  return s;
}

const char* dataset_path(const char* env) {
  const char* p = std::getenv(env);
  return p && *p ? p : nullptr;
}

}  // namespace

TEST(EdgeStream, BtcFieldMapping) {
  const auto s = parse("6,2,4,1289241911\n");
  ASSERT_EQ(s.edges.size(), 1u);
  EXPECT_EQ(s.edges[0].src, 6);
  EXPECT_EQ(s.edges[0].dst, 2);
  ASSERT_TRUE(s.edges[0].weight.has_value());
  EXPECT_EQ(*s.edges[0].weight, 4.0);
  EXPECT_EQ(s.edges[0].timestamp, 1289241911);
}

TEST(EdgeStream, PlainWhitespaceAndSorting) {
  const auto s = parse("1 2 30\n3 4 10\n5 5 20\n", EdgeFormat::plain);
  ASSERT_EQ(s.edges.size(), 2u);
  EXPECT_EQ(s.self_loops_dropped, 1u);
  EXPECT_EQ(s.edges[0].timestamp, 10);
  EXPECT_FALSE(s.edges[0].weight.has_value());
}

TEST(EdgeStream, ErrorsCarryLineNumbers) {
  try {
    parse("1,2,3,4\n1,x,3,4\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("1,2,3\n"), ParseError);
  EXPECT_THROW(parse(""), DataError);
}

TEST(Snapshots, UniformQuantilesCumulative) {
  const auto seq = snapshot_sequence(uniform_stream(100), {10, SnapshotMode::cumulative, AttributeRule::degree});
  ASSERT_EQ(seq.size(), 10u);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(seq.graphs[k].num_edges(), 10 * (k + 1));
  for (std::size_t k = 1; k < seq.size(); ++k) {
    const auto prev = id_edges(seq.graphs[k - 1]), cur = id_edges(seq.graphs[k]);
    EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    const auto& ids = seq.graphs[k].node_ids();
    for (auto id : seq.graphs[k - 1].node_ids()) EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end());
  }
}

TEST(Snapshots, SlidingHoldsOnlyTheInterval) {
  const auto seq = snapshot_sequence(uniform_stream(100), {10, SnapshotMode::sliding, AttributeRule::degree});
  for (const auto& g : seq.graphs) EXPECT_EQ(g.num_edges(), 10);
}

TEST(Snapshots, TwoSnapshotsNest) {
  std::ostringstream text;
  for (int k = 0; k < 37; ++k) text << (k * 7) % 11 << ',' << (k * 5) % 13 + 20 << ",1," << 1000 + (k * 13) % 17 << '\n';
  const auto seq = snapshot_sequence(parse(text.str()), {2, SnapshotMode::cumulative, AttributeRule::degree});
  const auto a = id_edges(seq.graphs[0]), b = id_edges(seq.graphs[1]);
  EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
}

TEST(Snapshots, FinalCumulativeSnapshotIsTheStaticGraph) {
  const auto stream = parse("1,2,1,1\n2,1,5,2\n2,3,-1,3\n3,4,2,3\n");
  const auto seq = snapshot_sequence(stream, {3, SnapshotMode::cumulative, AttributeRule::avg_rating});
  const auto stats = dataset_stats(stream);
  EXPECT_EQ(seq.graphs.back().num_nodes(), static_cast<int>(stats.num_nodes));
  EXPECT_EQ(seq.graphs.back().num_edges(), static_cast<int>(stats.num_simple_edges));
  EXPECT_EQ(stats.num_records, 4u);
  EXPECT_EQ(stats.num_simple_edges, 3u);
  // The repeated pair 1-2 keeps its latest rating, 5.
  const Graph& last = seq.graphs.back();
  EXPECT_EQ(last.edge_attrs()(0, 0), 5.0);
}

TEST(Snapshots, CountAboveDistinctTimestampsFails) {
  EXPECT_THROW(snapshot_sequence(parse("1,2,1,5\n3,4,1,5\n"), {2, SnapshotMode::cumulative, AttributeRule::degree}),
               DataError);
}

TEST(Snapshots, AttributeLengthsMatchNodeCounts) {
  const auto seq = snapshot_sequence(uniform_stream(60), {6, SnapshotMode::cumulative, AttributeRule::avg_rating});
  for (const auto& g : seq.graphs) {
    EXPECT_EQ(g.node_attrs().rows(), g.num_nodes());
    EXPECT_EQ(g.edge_attrs().rows(), g.num_edges());
  }
}

TEST(RatingAttributes, MeanOfIncidentRatings) {
  Eigen::MatrixXd ratings(2, 1);
  ratings << 4, -2;
  const Graph g({0, 1, 2, 3}, {{0, 1}, {0, 2}}, {}, ratings);
  const Graph r = assign_rating_attributes(g);
  EXPECT_DOUBLE_EQ(r.node_attrs()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(r.node_attrs()(1, 0), 4.0);
  EXPECT_DOUBLE_EQ(r.node_attrs()(2, 0), -2.0);
  EXPECT_DOUBLE_EQ(r.node_attrs()(3, 0), 0.0);

  Eigen::MatrixXd tens = Eigen::MatrixXd::Constant(3, 1, 10.0);
  const Graph t = assign_rating_attributes(Graph({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}}, {}, tens));
  EXPECT_TRUE((t.node_attrs().array() == 10.0).all());

  Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 7.0);
  const Graph s = assign_rating_attributes(Graph({5, 6}, {{0, 1}}, {}, one));
  EXPECT_DOUBLE_EQ(s.node_attrs()(0, 0), 7.0);
  EXPECT_DOUBLE_EQ(s.node_attrs()(1, 0), 7.0);
}

TEST(DatasetStats, PositiveFractionAbsentWithoutWeights) {
  const auto stats = dataset_stats(parse("1 2 3\n2 3 4\n", EdgeFormat::plain));
  EXPECT_FALSE(stats.positive_fraction.has_value());
  EXPECT_NE(format_stats(stats).find("---"), std::string::npos);
  const auto rated = dataset_stats(parse("1,2,4,1\n2,3,-1,2\n3,4,2,3\n4,5,1,4\n"));
  ASSERT_TRUE(rated.positive_fraction.has_value());
  EXPECT_DOUBLE_EQ(*rated.positive_fraction, 0.75);
}

// Public datasets are not bundled; point EVONET_BTC_OTC / EVONET_BTC_ALPHA at the CSV files.
TEST(PublicDatasets, BtcOtcTableCounts) {
  const char* path = dataset_path("EVONET_BTC_OTC");
  if (!path) GTEST_SKIP() << "EVONET_BTC_OTC not set";
  const auto stats = dataset_stats(parse_edge_stream(path, EdgeFormat::btc));
  EXPECT_EQ(stats.num_nodes, 5881u);
  EXPECT_EQ(stats.num_records, 35592u);
  ASSERT_TRUE(stats.positive_fraction.has_value());
  EXPECT_NEAR(*stats.positive_fraction, 0.89, 0.005);
}

TEST(PublicDatasets, BtcAlphaTableCounts) {
  const char* path = dataset_path("EVONET_BTC_ALPHA");
  if (!path) GTEST_SKIP() << "EVONET_BTC_ALPHA not set";
  const auto stats = dataset_stats(parse_edge_stream(path, EdgeFormat::btc));
  EXPECT_EQ(stats.num_nodes, 3783u);
  EXPECT_EQ(stats.num_records, 24186u);
}
