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

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace evonet {

using NodeId = std::int64_t;

/// Undirected edge between local node indices, stored with first < second.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph with node and edge attribute matrices.
///
/// Local node index i corresponds to node_ids()[i]. Edges are canonicalized
/// (u < v, sorted) and edge_attrs() row k belongs to edges()[k].
class Graph {
 public:
  Graph() = default;

  /// Validates and canonicalizes. Throws DataError on self-loops, duplicate
  /// edges, duplicate ids, out-of-range endpoints or attribute shape mismatch.
  /// Empty attribute matrices are accepted as "no attributes" (0 columns).
  Graph(std::vector<NodeId> node_ids, std::vector<Edge> edges,
        Eigen::MatrixXd node_attrs = {}, Eigen::MatrixXd edge_attrs = {});

  int num_nodes() const { return static_cast<int>(node_ids_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<NodeId>& node_ids() const { return node_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return adjacency_; }
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }
  bool has_edge(int u, int v) const;

  const Eigen::MatrixXd& node_attrs() const { return node_attrs_; }
  const Eigen::MatrixXd& edge_attrs() const { return edge_attrs_; }
  int node_attr_dim() const { return static_cast<int>(node_attrs_.cols()); }
  int edge_attr_dim() const { return static_cast<int>(edge_attrs_.cols()); }

  Graph with_attrs(Eigen::MatrixXd node_attrs, Eigen::MatrixXd edge_attrs) const;

  /// Relabels: node i of the result is node perm[i] of this graph.
  Graph permuted(std::span<const int> perm) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<NodeId> node_ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  Eigen::MatrixXd node_attrs_;
  Eigen::MatrixXd edge_attrs_;
};

/// Global first-appearance ordering of entities across a snapshot sequence.
class NodeRegistry {
 public:
  /// Appends id if unseen; returns its position.
  std::size_t add(NodeId id);
  bool contains(NodeId id) const { return positions_.contains(id); }
  /// Throws OrderingError for unknown ids.
  std::size_t position(NodeId id) const;
  std::size_t size() const { return order_.size(); }
  const std::vector<NodeId>& order() const { return order_; }

 private:
  std::unordered_map<NodeId, std::size_t> positions_;
  std::vector<NodeId> order_;
};

NodeRegistry build_registry(std::span<const Graph> snapshots);

struct GraphSequence {
  std::vector<Graph> graphs;
  NodeRegistry registry;
  int window_size = 10;

  std::size_t size() const { return graphs.size(); }
};

/// Builds the registry and reorders each snapshot's nodes into registry order.
GraphSequence make_sequence(std::vector<Graph> graphs, int window_size = 10);

/// Row i (0-based) holds bits to the i earlier nodes; row 0 is empty.
struct AdjacencyVectorSequence {
  std::vector<std::vector<std::uint8_t>> rows;

  std::size_t num_nodes() const { return rows.size(); }
  std::size_t popcount() const;
  /// Throws DataError unless row i has length i and entries in {0,1}.
  void validate() const;
  friend bool operator==(const AdjacencyVectorSequence&, const AdjacencyVectorSequence&) = default;
};

/// Local node indices of graph sorted by registry position.
std::vector<int> registry_order(const Graph& graph, const NodeRegistry& registry);

AdjacencyVectorSequence to_adjacency_sequence(const Graph& graph, const NodeRegistry& registry);

/// Only topology is reconstructed; attributes are empty.
Graph from_adjacency_sequence(const AdjacencyVectorSequence& seq, std::vector<NodeId> node_ids);

/// Node attribute = degree (one column); edge attribute = 1 (one column).
Graph assign_degree_attributes(const Graph& graph);

// JSON object {"nodes","edges","node_attrs","edge_attrs"}; sequences as JSON-lines.
std::string graph_to_json(const Graph& graph);
Graph graph_from_json(const std::string& text);
void write_sequence_jsonl(std::ostream& out, std::span<const Graph> graphs);
void write_sequence_jsonl(const std::string& path, std::span<const Graph> graphs);
std::vector<Graph> read_graphs_jsonl(std::istream& in);
GraphSequence read_sequence_jsonl(const std::string& path, int window_size = 10);

}  // namespace evonet
