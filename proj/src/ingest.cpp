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

#include "evonet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "evonet/errors.hpp"

namespace evonet {

EdgeFormat parse_edge_format(std::string_view name) {
  if (name == "btc") return EdgeFormat::btc;
  if (name == "plain") return EdgeFormat::plain;
  throw ConfigError("unknown edge format '" + std::string(name) + "'");
}

SnapshotMode parse_snapshot_mode(std::string_view name) {
  if (name == "cumulative") return SnapshotMode::cumulative;
  if (name == "sliding") return SnapshotMode::sliding;
  throw ConfigError("unknown snapshot mode '" + std::string(name) + "'");
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  const bool commas = line.find(',') != std::string_view::npos;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = commas ? line.find(',', start) : line.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = line.size();
    std::string_view field = line.substr(start, end - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    if (commas || !field.empty()) out.push_back(field);
    start = end + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EdgeStream parse_edge_stream(std::istream& in, EdgeFormat format) {
  EdgeStream stream;
  const std::size_t expected = format == EdgeFormat::btc ? 4 : 3;
  std::string line;
  std::size_t lineno = 0;
  bool any_row = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    any_row = true;
    auto fields = split_fields(line);
    if (fields.size() != expected)
      throw ParseError("expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()),
                       lineno);
    TimestampedEdge e;
    if (!parse_number(fields[0], e.src) || !parse_number(fields[1], e.dst))
      throw ParseError("node ids must be integers", lineno);
    if (format == EdgeFormat::btc) {
      double w = 0;
      if (!parse_number(fields[2], w)) throw ParseError("rating must be numeric", lineno);
      e.weight = w;
    }
    double ts = 0;
    if (!parse_number(fields.back(), ts) || !std::isfinite(ts) || ts < 0)
      throw ParseError("timestamp must be a non-negative number", lineno);
    e.timestamp = static_cast<std::int64_t>(std::floor(ts));
    if (e.src == e.dst) {
      ++stream.self_loops_dropped;
      continue;
    }
    stream.edges.push_back(e);
  }
  if (!any_row) throw DataError("edge stream is empty");
  std::stable_sort(stream.edges.begin(), stream.edges.end(),
                   [](const TimestampedEdge& a, const TimestampedEdge& b) { return a.timestamp < b.timestamp; });
  return stream;
}

EdgeStream parse_edge_stream(const std::string& path, EdgeFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_edge_stream(in, format);
}

namespace {

Graph build_snapshot(std::span<const TimestampedEdge> edges, const NodeRegistry& registry, AttributeRule rule,
                     bool weighted) {
  // Node set and registry positions; nodes in registry order.
  std::vector<std::size_t> positions;
  std::map<std::pair<NodeId, NodeId>, double> pairs;
  for (const auto& e : edges) {
    pairs[std::minmax(e.src, e.dst)] = e.weight.value_or(1.0);
  }
  std::unordered_set<NodeId> present;
  for (const auto& [key, w] : pairs) {
    present.insert(key.first);
    present.insert(key.second);
  }
  positions.reserve(present.size());
  for (NodeId id : present) positions.push_back(registry.position(id));
  std::sort(positions.begin(), positions.end());
  std::vector<NodeId> ids;
  ids.reserve(positions.size());
  std::unordered_map<NodeId, int> local;
  for (std::size_t p : positions) {
    local[registry.order()[p]] = static_cast<int>(ids.size());
    ids.push_back(registry.order()[p]);
  }
  std::vector<Edge> out_edges;
  Eigen::MatrixXd weights(static_cast<Eigen::Index>(pairs.size()), 1);
  Eigen::Index k = 0;
  for (const auto& [key, w] : pairs) {
    out_edges.push_back({local[key.first], local[key.second]});
    weights(k++, 0) = w;
  }
  Graph g(std::move(ids), std::move(out_edges), {}, weighted ? weights : Eigen::MatrixXd{});
  if (rule == AttributeRule::avg_rating) return assign_rating_attributes(g);
  return assign_degree_attributes(g);
}

}  // namespace

GraphSequence snapshot_sequence(const EdgeStream& stream, const SnapshotSpec& spec, int window_size) {
  const auto& edges = stream.edges;
  if (edges.empty()) throw DataError("no edges to snapshot");
  if (spec.count < 2) throw ConfigError("snapshot count must be >= 2");
  {
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < edges.size(); ++i) distinct += edges[i].timestamp != edges[i - 1].timestamp;
    if (static_cast<std::size_t>(spec.count) > distinct)
      throw DataError("snapshot count " + std::to_string(spec.count) + " exceeds the " + std::to_string(distinct) +
                      " distinct timestamps");
  }
  const bool weighted = std::all_of(edges.begin(), edges.end(), [](const auto& e) { return e.weight.has_value(); });
  if (spec.attribute_rule == AttributeRule::avg_rating && !weighted)
    throw ConfigError("avg_rating attributes need weighted edges");

  // Prefix end for quantile k: all edges with timestamp <= ts[ceil(k E / count) - 1].
  const std::size_t total = edges.size();
  std::vector<std::size_t> ends(spec.count);
  for (int k = 1; k <= spec.count; ++k) {
    std::size_t idx = (static_cast<std::size_t>(k) * total + spec.count - 1) / spec.count - 1;
    std::int64_t threshold = edges[idx].timestamp;
    auto it = std::upper_bound(edges.begin(), edges.end(), threshold,
                               [](std::int64_t t, const TimestampedEdge& e) { return t < e.timestamp; });
    ends[k - 1] = static_cast<std::size_t>(it - edges.begin());
  }

  NodeRegistry registry;
  for (const auto& e : edges) {
    registry.add(e.src);
    registry.add(e.dst);
  }

  std::vector<Graph> graphs(spec.count);
  const std::span<const TimestampedEdge> all(edges);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < spec.count; ++k) {
    std::size_t begin = spec.mode == SnapshotMode::sliding && k > 0 ? ends[k - 1] : 0;
    graphs[k] = build_snapshot(all.subspan(begin, ends[k] - begin), registry, spec.attribute_rule, weighted);
  }

  GraphSequence seq;
  seq.window_size = window_size;
  seq.graphs = std::move(graphs);
  seq.registry = build_registry(seq.graphs);
  return seq;
}

Graph assign_rating_attributes(const Graph& graph) {
  if (graph.edge_attr_dim() < 1 && graph.num_edges() > 0)
    throw DataError("rating attributes need edge weights in edge_attrs column 0");
  const int n = graph.num_nodes();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd l(graph.num_edges(), 1);
  for (int k = 0; k < graph.num_edges(); ++k) {
    const auto& e = graph.edges()[k];
    double w = graph.edge_attrs()(k, 0);
    l(k, 0) = w;
    sum[e.u] += w;
    sum[e.v] += w;
    count[e.u] += 1;
    count[e.v] += 1;
  }
  Eigen::MatrixXd x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = count[i] > 0 ? sum[i] / count[i] : 0.0;
  return graph.with_attrs(std::move(x), std::move(l));
}

DatasetStats dataset_stats(const EdgeStream& stream) {
  DatasetStats s;
  std::unordered_set<NodeId> nodes;
  std::set<std::pair<NodeId, NodeId>> simple;
  std::size_t positive = 0;
  bool weighted = !stream.edges.empty();
  for (const auto& e : stream.edges) {
    nodes.insert(e.src);
    nodes.insert(e.dst);
    simple.insert(std::minmax(e.src, e.dst));
    if (!e.weight) weighted = false;
    else if (*e.weight > 0) ++positive;
  }
  s.num_nodes = nodes.size();
  s.num_records = stream.edges.size();
  s.num_simple_edges = simple.size();
  if (weighted) s.positive_fraction = static_cast<double>(positive) / static_cast<double>(s.num_records);
  if (!stream.edges.empty()) {
    s.first_timestamp = stream.edges.front().timestamp;
    s.last_timestamp = stream.edges.back().timestamp;
  }
  return s;
}

std::string format_stats(const DatasetStats& s) {
  std::ostringstream out;
  out << "|V| " << s.num_nodes << "\n|E| " << s.num_records << "\nsimple edges " << s.num_simple_edges
      << "\n% pos. edges ";
  if (s.positive_fraction)
    out << std::lround(100.0 * *s.positive_fraction) << "%";
  else
    out << "---";
  out << "\nfirst timestamp " << s.first_timestamp << "\nlast timestamp " << s.last_timestamp << "\n";
  return out.str();
}

}  // namespace evonet
