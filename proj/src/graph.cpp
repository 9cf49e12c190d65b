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

#include "evonet/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "evonet/errors.hpp"
#include "json.hpp"

namespace evonet {

using nlohmann::json;

Graph::Graph(std::vector<NodeId> node_ids, std::vector<Edge> edges, Eigen::MatrixXd node_attrs,
             Eigen::MatrixXd edge_attrs)
    : node_ids_(std::move(node_ids)) {
  const int n = num_nodes();
  {
    std::unordered_set<NodeId> seen;
    for (NodeId id : node_ids_)
      if (!seen.insert(id).second) throw DataError("duplicate node id " + std::to_string(id));
  }
  if (node_attrs.size() == 0) node_attrs.resize(n, 0);
  if (node_attrs.rows() != n) throw DataError("node_attrs row count does not match node count");
  if (edge_attrs.size() == 0) edge_attrs.resize(static_cast<Eigen::Index>(edges.size()), 0);
  if (edge_attrs.rows() != static_cast<Eigen::Index>(edges.size()))
    throw DataError("edge_attrs row count does not match edge count");

  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw DataError("edge endpoint out of range");
    if (e.u == e.v) throw DataError("self-loop on node " + std::to_string(node_ids_[e.u]));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::vector<int> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return edges[a] < edges[b]; });

  edges_.reserve(edges.size());
  edge_attrs_.resize(edge_attrs.rows(), edge_attrs.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Edge& e = edges[order[k]];
    if (!edges_.empty() && edges_.back() == e) throw DataError("duplicate edge");
    edges_.push_back(e);
    edge_attrs_.row(static_cast<Eigen::Index>(k)) = edge_attrs.row(order[k]);
  }
  node_attrs_ = std::move(node_attrs);

  adjacency_.assign(n, {});
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int u, int v) const {
  const auto& nb = adjacency_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::with_attrs(Eigen::MatrixXd node_attrs, Eigen::MatrixXd edge_attrs) const {
  Graph g = *this;
  if (node_attrs.rows() != num_nodes() || edge_attrs.rows() != num_edges())
    throw DataError("attribute shape mismatch");
  g.node_attrs_ = std::move(node_attrs);
  g.edge_attrs_ = std::move(edge_attrs);
  return g;
}

Graph Graph::permuted(std::span<const int> perm) const {
  const int n = num_nodes();
  if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation size mismatch");
  std::vector<int> inverse(n, -1);
  for (int i = 0; i < n; ++i) inverse[perm[i]] = i;
  std::vector<NodeId> ids(n);
  Eigen::MatrixXd x(n, node_attrs_.cols());
  for (int i = 0; i < n; ++i) {
    ids[i] = node_ids_[perm[i]];
    x.row(i) = node_attrs_.row(perm[i]);
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) edges.push_back({inverse[e.u], inverse[e.v]});
  return Graph(std::move(ids), std::move(edges), std::move(x), edge_attrs_);
}

bool operator==(const Graph& a, const Graph& b) {
  return a.node_ids_ == b.node_ids_ && a.edges_ == b.edges_ &&
         a.node_attrs_.rows() == b.node_attrs_.rows() &&
         a.node_attrs_.cols() == b.node_attrs_.cols() && a.node_attrs_ == b.node_attrs_ &&
         a.edge_attrs_.rows() == b.edge_attrs_.rows() &&
         a.edge_attrs_.cols() == b.edge_attrs_.cols() && a.edge_attrs_ == b.edge_attrs_;
}

std::size_t NodeRegistry::add(NodeId id) {
  auto [it, inserted] = positions_.try_emplace(id, order_.size());
  if (inserted) order_.push_back(id);
  return it->second;
}

std::size_t NodeRegistry::position(NodeId id) const {
  auto it = positions_.find(id);
  if (it == positions_.end()) throw OrderingError("node id " + std::to_string(id) + " not in ordering");
  return it->second;
}

NodeRegistry build_registry(std::span<const Graph> snapshots) {
  NodeRegistry registry;
  for (const auto& g : snapshots)
    for (NodeId id : g.node_ids()) registry.add(id);
  return registry;
}

std::vector<int> registry_order(const Graph& graph, const NodeRegistry& registry) {
  std::vector<std::size_t> pos(graph.num_nodes());
  for (int i = 0; i < graph.num_nodes(); ++i) pos[i] = registry.position(graph.node_ids()[i]);
  std::vector<int> order(graph.num_nodes());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pos[a] < pos[b]; });
  return order;
}

GraphSequence make_sequence(std::vector<Graph> graphs, int window_size) {
  GraphSequence seq;
  seq.window_size = window_size;
  seq.registry = build_registry(graphs);
  seq.graphs.reserve(graphs.size());
  for (auto& g : graphs) {
    auto order = registry_order(g, seq.registry);
    if (std::is_sorted(order.begin(), order.end()))
      seq.graphs.push_back(std::move(g));
    else
      seq.graphs.push_back(g.permuted(order));
  }
  return seq;
}

std::size_t AdjacencyVectorSequence::popcount() const {
  std::size_t total = 0;
  for (const auto& row : rows)
    for (auto b : row) total += b;
  return total;
}

void AdjacencyVectorSequence::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != i) throw DataError("adjacency vector " + std::to_string(i) + " has wrong length");
    for (auto b : rows[i])
      if (b > 1) throw DataError("adjacency vector entry outside {0,1}");
  }
}

AdjacencyVectorSequence to_adjacency_sequence(const Graph& graph, const NodeRegistry& registry) {
  const auto order = registry_order(graph, registry);
  const int n = graph.num_nodes();
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i) rank[order[i]] = i;
  AdjacencyVectorSequence seq;
  seq.rows.resize(n);
  for (int i = 0; i < n; ++i) seq.rows[i].assign(i, 0);
  for (const auto& e : graph.edges()) {
    int a = rank[e.u], b = rank[e.v];
    if (a < b) std::swap(a, b);
    seq.rows[a][b] = 1;
  }
  return seq;
}

Graph from_adjacency_sequence(const AdjacencyVectorSequence& seq, std::vector<NodeId> node_ids) {
  if (seq.rows.size() != node_ids.size())
    throw DimensionError("adjacency sequence has " + std::to_string(seq.rows.size()) + " rows but " +
                         std::to_string(node_ids.size()) + " node ids were given");
  seq.validate();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < seq.rows.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (seq.rows[i][j]) edges.push_back({static_cast<int>(j), static_cast<int>(i)});
  return Graph(std::move(node_ids), std::move(edges));
}

Graph assign_degree_attributes(const Graph& graph) {
  Eigen::MatrixXd x(graph.num_nodes(), 1);
  for (int i = 0; i < graph.num_nodes(); ++i) x(i, 0) = graph.degree(i);
  Eigen::MatrixXd l = Eigen::MatrixXd::Ones(graph.num_edges(), 1);
  return graph.with_attrs(std::move(x), std::move(l));
}

namespace {

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_matrix(const json& rows, std::size_t expected_rows, const char* field) {
  if (!rows.is_array()) throw DataError(std::string(field) + " must be an array");
  if (rows.size() != expected_rows) throw DataError(std::string(field) + " row count mismatch");
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  const std::size_t cols = rows[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DataError(std::string(field) + " rows are ragged");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c].get<double>();
  }
  return m;
}

Graph graph_from_json_value(const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
    throw DataError("graph JSON needs \"nodes\" and \"edges\"");
  std::vector<NodeId> ids = j.at("nodes").get<std::vector<NodeId>>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw DataError("edge must be a pair");
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  Eigen::MatrixXd x, l;
  if (j.contains("node_attrs")) x = rows_matrix(j["node_attrs"], ids.size(), "node_attrs");
  if (j.contains("edge_attrs")) l = rows_matrix(j["edge_attrs"], edges.size(), "edge_attrs");
  return Graph(std::move(ids), std::move(edges), std::move(x), std::move(l));
}

}  // namespace

std::string graph_to_json(const Graph& graph) {
  json j;
  j["nodes"] = graph.node_ids();
  json edges = json::array();
  for (const auto& e : graph.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  j["node_attrs"] = matrix_rows(graph.node_attrs());
  j["edge_attrs"] = matrix_rows(graph.edge_attrs());
  return j.dump();
}

Graph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid graph JSON: ") + e.what());
  }
  try {
    return graph_from_json_value(j);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid graph JSON: ") + e.what());
  }
}

void write_sequence_jsonl(std::ostream& out, std::span<const Graph> graphs) {
  for (const auto& g : graphs) out << graph_to_json(g) << '\n';
}

void write_sequence_jsonl(const std::string& path, std::span<const Graph> graphs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  write_sequence_jsonl(out, graphs);
}

std::vector<Graph> read_graphs_jsonl(std::istream& in) {
  std::vector<Graph> graphs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      graphs.push_back(graph_from_json(line));
    } catch (const DataError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return graphs;
}

GraphSequence read_sequence_jsonl(const std::string& path, int window_size) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  auto graphs = read_graphs_jsonl(in);
  if (graphs.empty()) throw DataError(path + " contains no graphs");
  return make_sequence(std::move(graphs), window_size);
}

}  // namespace evonet
