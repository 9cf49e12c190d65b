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
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "evonet/graph.hpp"
#include "evonet/nn.hpp"

namespace evonet {

enum class LossForm { bce, literal };
LossForm parse_loss_form(std::string_view name);

struct DecoderConfig {
  int state_dim = 128;  // equals the embedding width 2d
  int max_nodes = 512;
};

/// p[i][j] = p(a_{j,i} = 1) for j < i, in ascending j like the adjacency rows.
struct EdgeProbabilityTable {
  std::vector<std::vector<double>> p;
};

/// Bernoulli draws from a seeded engine, or a fixed threshold.
class EdgeSampler {
 public:
  static EdgeSampler bernoulli(std::uint64_t seed) { return EdgeSampler(seed, -1.0); }
  static EdgeSampler threshold(double cut = 0.5) { return EdgeSampler(0, cut); }
  bool draw(double p);

 private:
  EdgeSampler(std::uint64_t seed, double cut) : rng_(seed), cut_(cut) {}
  std::mt19937_64 rng_;
  double cut_;
};

/// Two-level autoregressive generator. The graph-level GRU advances once per
/// node, fed the previous node's adjacency vector; the edge-level GRU starts
/// from that state and emits one edge probability per earlier node.
///
/// Within a row the earlier nodes are visited nearest-first (j = i-1 down to
/// 1), and the graph-level input lists the previous row in the same order,
/// zero-padded or truncated to max_nodes - 1 entries. The first edge step of
/// each row receives a start bit of 1.
class Decoder {
 public:
  static Decoder create(nn::ParamStore& store, const DecoderConfig& cfg, std::mt19937_64& rng);

  const DecoderConfig& config() const { return cfg_; }
  int lookback() const { return cfg_.max_nodes - 1; }
  const nn::GruCell& graph_rnn() const { return graph_rnn_; }
  const nn::GruCell& edge_rnn() const { return edge_rnn_; }
  const nn::Linear& head() const { return head_; }

  /// h_i from h_{i-1} and the previous row (ascending order as stored).
  nn::Vector graph_level_step(const nn::Vector& h_prev, const std::vector<std::uint8_t>& prev_row) const;
  /// (m_j, p_j) from m_{j-1} and the previous edge bit.
  std::pair<nn::Vector, double> edge_level_step(const nn::Vector& m_prev, double a_prev) const;

  /// Teacher-forced edge loss summed over every bit of the target.
  nn::Var loss(ad::Tape& tape, const nn::Var& seed, const AdjacencyVectorSequence& target, LossForm form) const;
  /// Teacher-forced probabilities without a tape.
  EdgeProbabilityTable probabilities(const nn::Vector& seed, const AdjacencyVectorSequence& target) const;

  AdjacencyVectorSequence sample(const nn::Vector& seed, int n_nodes, EdgeSampler& sampler) const;

 private:
  nn::Matrix lookback_input(const std::vector<std::uint8_t>& row) const;

  DecoderConfig cfg_;
  nn::GruCell graph_rnn_;
  nn::GruCell edge_rnn_;
  nn::Linear head_;
};

/// literal: sum a (1 - p) + (1 - a) p.  bce: sum -[a log p + (1 - a) log(1 - p)].
double edge_loss(const EdgeProbabilityTable& table, const AdjacencyVectorSequence& target, LossForm form);

/// Samples a graph and wraps it with node ids 0..n-1.
Graph sample_graph(const Decoder& decoder, const nn::Vector& seed, int n_nodes, EdgeSampler& sampler);

}  // namespace evonet
