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

#include "evonet/synthetic.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "evonet/errors.hpp"

namespace evonet {

Family parse_family(std::string_view name) {
  if (name == "path") return Family::path;
  if (name == "cycle") return Family::cycle;
  if (name == "ladder") return Family::ladder;
  throw ConfigError("unknown graph family '" + std::string(name) + "'");
}

GrowthMode parse_growth_mode(std::string_view name) {
  if (name == "grow") return GrowthMode::grow;
  if (name == "grow-with-removal" || name == "grow_with_removal") return GrowthMode::grow_with_removal;
  throw ConfigError("unknown growth mode '" + std::string(name) + "'");
}

std::string to_string(Family family) {
  switch (family) {
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::ladder: return "ladder";
  }
  return {};
}

std::string to_string(GrowthMode mode) {
  return mode == GrowthMode::grow ? "grow" : "grow-with-removal";
}

namespace {

// Mutable working topology keyed by creation ids; ids are dense and increasing.
class EvolvingTopology {
 public:
  NodeId add_node() {
    NodeId id = next_id_++;
    alive_.push_back(id);
    return id;
  }
  void add_edge(NodeId a, NodeId b) { edges_.insert(std::minmax(a, b)); }
  void remove_edge(NodeId a, NodeId b) { edges_.erase(std::minmax(a, b)); }
  void remove_node(NodeId id) {
    alive_.erase(std::find(alive_.begin(), alive_.end(), id));
    for (auto it = edges_.begin(); it != edges_.end();)
      it = (it->first == id || it->second == id) ? edges_.erase(it) : std::next(it);
  }
  NodeId first() const { return alive_.front(); }
  NodeId second() const { return alive_[1]; }
  NodeId last() const { return alive_.back(); }
  NodeId second_last() const { return alive_[alive_.size() - 2]; }
  std::size_t size() const { return alive_.size(); }

  Graph snapshot() const {
    std::vector<NodeId> ids(alive_.begin(), alive_.end());
    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    auto local = [&](NodeId id) {
      return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    for (const auto& [a, b] : edges_) edges.push_back({local(a), local(b)});
    return assign_degree_attributes(Graph(std::move(ids), std::move(edges)));
  }

 private:
  NodeId next_id_ = 0;
  std::deque<NodeId> alive_;
  std::set<std::pair<NodeId, NodeId>> edges_;
};

void require_steps(int steps) {
  if (steps < 1) throw ConfigError("steps must be >= 1");
}

bool removal_step(GrowthMode mode, int t) { return mode == GrowthMode::grow_with_removal && t > 0 && t % 3 == 0; }

}  // namespace

GraphSequence gen_path_sequence(int steps, GrowthMode mode) {
  require_steps(steps);
  EvolvingTopology topo;
  NodeId a = topo.add_node(), b = topo.add_node(), c = topo.add_node();
  topo.add_edge(a, b);
  topo.add_edge(b, c);
  std::vector<Graph> graphs{topo.snapshot()};
  for (int t = 1; t < steps; ++t) {
    if (removal_step(mode, t)) {
      if (topo.size() <= 2) throw GenerationError("path removal would leave fewer than 2 nodes");
      topo.remove_node(topo.first());
    } else {
      NodeId tail = topo.last();
      topo.add_edge(tail, topo.add_node());
    }
    graphs.push_back(topo.snapshot());
  }
  return make_sequence(std::move(graphs));
}

GraphSequence gen_cycle_sequence(int steps, GrowthMode mode) {
  require_steps(steps);
  EvolvingTopology topo;
  NodeId a = topo.add_node(), b = topo.add_node(), c = topo.add_node();
  topo.add_edge(a, b);
  topo.add_edge(b, c);
  topo.add_edge(c, a);
  std::vector<Graph> graphs{topo.snapshot()};
  for (int t = 1; t < steps; ++t) {
    NodeId first = topo.first(), last = topo.last();
    NodeId fresh = topo.add_node();
    topo.remove_edge(first, last);
    topo.add_edge(first, fresh);
    topo.add_edge(last, fresh);
    if (removal_step(mode, t)) {
      if (topo.size() <= 3) throw GenerationError("cycle removal would leave fewer than 3 nodes");
      topo.remove_node(topo.first());
      topo.add_edge(topo.first(), topo.last());
    }
    graphs.push_back(topo.snapshot());
  }
  return make_sequence(std::move(graphs));
}

GraphSequence gen_ladder_sequence(int steps) {
  require_steps(steps);
  EvolvingTopology topo;
  NodeId a0 = topo.add_node(), b0 = topo.add_node(), a1 = topo.add_node(), b1 = topo.add_node();
  topo.add_edge(a0, b0);
  topo.add_edge(a1, b1);
  topo.add_edge(a0, a1);
  topo.add_edge(b0, b1);
  std::vector<Graph> graphs{topo.snapshot()};
  for (int t = 1; t < steps; ++t) {
    NodeId rail_a = topo.second_last(), rail_b = topo.last();
    NodeId a = topo.add_node(), b = topo.add_node();
    topo.add_edge(a, b);
    topo.add_edge(a, rail_a);
    topo.add_edge(b, rail_b);
    graphs.push_back(topo.snapshot());
  }
  return make_sequence(std::move(graphs));
}

GraphSequence generate(const SyntheticScenario& scenario) {
  switch (scenario.family) {
    case Family::path: return gen_path_sequence(scenario.steps, scenario.mode);
    case Family::cycle: return gen_cycle_sequence(scenario.steps, scenario.mode);
    case Family::ladder:
      if (scenario.mode != GrowthMode::grow) throw ConfigError("ladder supports only grow mode");
      return gen_ladder_sequence(scenario.steps);
  }
  throw ConfigError("unknown family");
}

}  // namespace evonet
