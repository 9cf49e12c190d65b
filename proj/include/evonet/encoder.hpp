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

#include <random>
#include <span>
#include <string>
#include <vector>

#include "evonet/graph.hpp"
#include "evonet/nn.hpp"

namespace evonet {

struct EncoderConfig {
  int hidden_dim = 64;   // node-state width d; embeddings have 2d entries
  int depth = 2;         // message-passing rounds K
  bool tie_weights = false;
  int set2set_steps = 3;
  int edge_attr_dim = 1;  // 0 ignores edge attributes
};

/// Message-passing encoder: K rounds of neighbour aggregation (MLP then sum)
/// and GRU update, followed by a Set2Set readout into a 2d-dim embedding.
class Encoder {
 public:
  static Encoder create(nn::ParamStore& store, const EncoderConfig& cfg, std::mt19937_64& rng);

  const EncoderConfig& config() const { return cfg_; }
  int embedding_dim() const { return 2 * cfg_.hidden_dim; }

  /// Zero-padded node attributes, d x n.
  nn::Matrix initial_states(const Graph& graph) const;
  /// Per-node messages for round k: column v = sum over neighbours w of MLP([h_w; l_vw]).
  nn::Var messages(ad::Tape& tape, int round, const nn::Var& states, const Graph& graph) const;
  nn::Var node_states(ad::Tape& tape, const Graph& graph) const;
  nn::Var readout(ad::Tape& tape, const nn::Var& states) const;
  nn::Var encode(ad::Tape& tape, const Graph& graph) const;
  nn::Vector encode(const Graph& graph) const;

  const nn::Mlp& mlp(int round) const { return mlps_[cfg_.tie_weights ? 0 : round]; }
  const nn::GruCell& gru(int round) const { return grus_[cfg_.tie_weights ? 0 : round]; }
  const nn::LstmCell& set2set_cell() const { return set2set_; }

 private:
  EncoderConfig cfg_;
  std::vector<nn::Mlp> mlps_;
  std::vector<nn::GruCell> grus_;
  nn::LstmCell set2set_;
};

/// Sum of MLP(h) over a neighbour multiset, reduced in a canonical order so
/// that permutations of the input give bit-identical results. Empty -> zeros.
nn::Vector aggregate(std::span<const nn::Vector> neighbor_states, const nn::Mlp& mlp, int out_dim);

nn::Vector gru_update(const nn::Vector& h, const nn::Vector& m, const nn::GruCell& cell);

/// Set2Set over the columns of node_states (d x n). Output has 2d entries.
nn::Vector set2set_readout(const nn::Matrix& node_states, const nn::LstmCell& cell, int steps);

/// Column permutation sorting columns lexicographically.
std::vector<int> canonical_column_order(const nn::Matrix& m);

}  // namespace evonet
