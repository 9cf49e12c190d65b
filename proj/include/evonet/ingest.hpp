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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evonet/graph.hpp"

namespace evonet {

struct TimestampedEdge {
  NodeId src = 0;
  NodeId dst = 0;
  std::optional<double> weight;
  std::int64_t timestamp = 0;
};

enum class EdgeFormat { btc, plain };  // src,dst,rating,ts  |  src,dst,ts
enum class SnapshotMode { cumulative, sliding };
enum class AttributeRule { degree, avg_rating };

EdgeFormat parse_edge_format(std::string_view name);
SnapshotMode parse_snapshot_mode(std::string_view name);

struct EdgeStream {
  std::vector<TimestampedEdge> edges;  // stable-sorted by timestamp
  std::size_t self_loops_dropped = 0;
};

EdgeStream parse_edge_stream(std::istream& in, EdgeFormat format);
EdgeStream parse_edge_stream(const std::string& path, EdgeFormat format);

struct SnapshotSpec {
  int count = 1000;
  SnapshotMode mode = SnapshotMode::cumulative;
  AttributeRule attribute_rule = AttributeRule::degree;
};

/// Snapshot k (1-based) holds the edges up to the k-th of `count` uniform
/// quantiles of the edge timestamps (cumulative), or those since the previous
/// quantile (sliding). Repeated pairs collapse; the latest weight wins.
GraphSequence snapshot_sequence(const EdgeStream& stream, const SnapshotSpec& spec, int window_size = 10);

/// Expects the rating in edge_attrs column 0. Node attribute is the mean of
/// incident ratings (0 when the node has none); edge attribute stays the rating.
Graph assign_rating_attributes(const Graph& graph);

struct DatasetStats {
  std::size_t num_nodes = 0;
  std::size_t num_records = 0;   // interaction rows, as tabulated for the public datasets
  std::size_t num_simple_edges = 0;  // undirected, collapsed
  std::optional<double> positive_fraction;
  std::int64_t first_timestamp = 0;
  std::int64_t last_timestamp = 0;
};

DatasetStats dataset_stats(const EdgeStream& stream);
std::string format_stats(const DatasetStats& stats);

}  // namespace evonet
