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

#include "evonet/decoder.hpp"

#include <cmath>
#include <numeric>

#include "evonet/errors.hpp"

namespace evonet {

using nn::Matrix;
using nn::Var;
using nn::Vector;

LossForm parse_loss_form(std::string_view name) {
  if (name == "bce") return LossForm::bce;
  if (name == "literal") return LossForm::literal;
  throw ConfigError("unknown loss form '" + std::string(name) + "'");
}

bool EdgeSampler::draw(double p) {
  if (cut_ >= 0) return p > cut_;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
}

Decoder Decoder::create(nn::ParamStore& store, const DecoderConfig& cfg, std::mt19937_64& rng) {
  if (cfg.max_nodes < 2) throw ConfigError("max_nodes must be >= 2");
  Decoder dec;
  dec.cfg_ = cfg;
  dec.graph_rnn_ = nn::GruCell::create(store, "decoder/graph_rnn", cfg.max_nodes - 1, cfg.state_dim, true, rng);
  dec.edge_rnn_ = nn::GruCell::create(store, "decoder/edge_rnn", 1, cfg.state_dim, true, rng);
  dec.head_ = nn::Linear::create(store, "decoder/head", cfg.state_dim, 1, true, rng);
  return dec;
}

Matrix Decoder::lookback_input(const std::vector<std::uint8_t>& row) const {
  Matrix x = Matrix::Zero(lookback(), 1);
  const int len = static_cast<int>(row.size());
  for (int k = 0; k < len && k < lookback(); ++k) x(k, 0) = row[len - 1 - k];
  return x;
}

Vector Decoder::graph_level_step(const Vector& h_prev, const std::vector<std::uint8_t>& prev_row) const {
  if (h_prev.size() != cfg_.state_dim) throw DimensionError("graph-level state width mismatch");
  return graph_rnn_.eval(lookback_input(prev_row), h_prev).col(0);
}

std::pair<Vector, double> Decoder::edge_level_step(const Vector& m_prev, double a_prev) const {
  Matrix x(1, 1);
  x(0, 0) = a_prev;
  Vector m = edge_rnn_.eval(x, m_prev).col(0);
  const double p = nn::sigmoid(head_.eval(m)(0, 0));
  return {std::move(m), p};
}

Var Decoder::loss(ad::Tape& tape, const Var& seed, const AdjacencyVectorSequence& target, LossForm form) const {
  target.validate();
  const int n = static_cast<int>(target.num_nodes());
  if (n < 1) throw DimensionError("target graph has no nodes");
  if (n > cfg_.max_nodes)
    throw DimensionError("target has " + std::to_string(n) + " nodes, above max_nodes " +
                         std::to_string(cfg_.max_nodes));
  if (seed.rows() != cfg_.state_dim || seed.cols() != 1) throw DimensionError("decoder seed width mismatch");
  if (n == 1) return tape.constant(Matrix::Zero(1, 1));

  // Graph level: column r of the input is row r-1 reversed (column 0 is empty).
  Matrix inputs = Matrix::Zero(lookback(), n);
  for (int r = 1; r < n; ++r) inputs.col(r) = lookback_input(target.rows[r - 1]);
  auto proj = graph_rnn_.project(tape, tape.constant(std::move(inputs)));
  std::vector<Var> states;
  states.reserve(n - 1);
  Var h = seed;
  for (int r = 0; r < n; ++r) {
    nn::GruCell::Projection col{ad::columns(proj.r, r, 1), ad::columns(proj.z, r, 1), ad::columns(proj.h, r, 1)};
    h = graph_rnn_.step(tape, col, h);
    if (r >= 1) states.push_back(h);
  }

  // Edge level, batched over rows: column c is row c+1; at step k rows r > k are active.
  Var m = ad::hcat(states);
  std::vector<Var> losses;
  losses.reserve(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    const int active = n - 1 - k;
    if (k > 0) m = ad::columns(m, 1, active);
    Matrix bits(1, active), prev(1, active);
    for (int c = 0; c < active; ++c) {
      const int r = k + 1 + c;
      bits(0, c) = target.rows[r][r - 1 - k];
      prev(0, c) = k == 0 ? 1.0 : target.rows[r][r - k];
    }
    m = edge_rnn_.forward(tape, tape.constant(std::move(prev)), m);
    Var logits = head_.forward(tape, m);
    losses.push_back(form == LossForm::bce ? ad::bce_with_logits_sum(logits, bits)
                                           : ad::linear_edge_loss_sum(logits, bits));
  }
  return ad::add_scalars(losses);
}

EdgeProbabilityTable Decoder::probabilities(const Vector& seed, const AdjacencyVectorSequence& target) const {
  target.validate();
  const int n = static_cast<int>(target.num_nodes());
  EdgeProbabilityTable table;
  table.p.resize(n);
  Vector h = seed;
  for (int r = 0; r < n; ++r) {
    h = graph_level_step(h, r == 0 ? std::vector<std::uint8_t>{} : target.rows[r - 1]);
    table.p[r].assign(r, 0.0);
    Vector m = h;
    double prev = 1.0;
    for (int k = 0; k < r; ++k) {
      auto [next, p] = edge_level_step(m, prev);
      m = std::move(next);
      const int j = r - 1 - k;
      table.p[r][j] = p;
      prev = target.rows[r][j];
    }
  }
  return table;
}

AdjacencyVectorSequence Decoder::sample(const Vector& seed, int n_nodes, EdgeSampler& sampler) const {
  if (n_nodes < 1 || n_nodes > cfg_.max_nodes)
    throw DimensionError("n_nodes must be in [1, " + std::to_string(cfg_.max_nodes) + "], got " +
                         std::to_string(n_nodes));
  if (seed.size() != cfg_.state_dim) throw DimensionError("decoder seed width mismatch");
  const auto& wr = graph_rnn_.w_r->value;
  const auto& wz = graph_rnn_.w_z->value;
  const auto& wh = graph_rnn_.w->value;

  // Edge-level input projections for the two possible bits.
  Matrix zero = Matrix::Zero(1, 1), one = Matrix::Ones(1, 1);
  const nn::GruCell::PlainProjection bit_proj[2] = {edge_rnn_.project(zero), edge_rnn_.project(one)};

  AdjacencyVectorSequence out;
  out.rows.resize(n_nodes);
  Matrix h = seed;
  for (int r = 0; r < n_nodes; ++r) {
    // Sparse graph-level projection: only set bits of the previous row contribute.
    nn::GruCell::PlainProjection gp{graph_rnn_.b_r->value, graph_rnn_.b_z->value, graph_rnn_.b->value};
    if (r > 0) {
      const auto& prev = out.rows[r - 1];
      const int len = static_cast<int>(prev.size());
      for (int k = 0; k < len && k < lookback(); ++k) {
        if (!prev[len - 1 - k]) continue;
        gp.r += wr.col(k);
        gp.z += wz.col(k);
        gp.h += wh.col(k);
      }
    }
    h = graph_rnn_.step(gp, h);
    out.rows[r].assign(r, 0);
    Matrix m = h;
    int prev_bit = 1;
    for (int k = 0; k < r; ++k) {
      m = edge_rnn_.step(bit_proj[prev_bit], m);
      const double p = nn::sigmoid(head_.eval(m)(0, 0));
      const bool bit = sampler.draw(p);
      out.rows[r][r - 1 - k] = bit ? 1 : 0;
      prev_bit = bit ? 1 : 0;
    }
  }
  return out;
}

double edge_loss(const EdgeProbabilityTable& table, const AdjacencyVectorSequence& target, LossForm form) {
  if (table.p.size() != target.rows.size()) throw DimensionError("probability table and target sizes differ");
  double total = 0;
  for (std::size_t i = 0; i < target.rows.size(); ++i) {
    if (table.p[i].size() != target.rows[i].size()) throw DimensionError("probability row length mismatch");
    for (std::size_t j = 0; j < i; ++j) {
      const double p = table.p[i][j];
      const double a = target.rows[i][j];
      if (form == LossForm::literal) {
        total += a * (1 - p) + (1 - a) * p;
      } else {
        if (!(p > 0.0 && p < 1.0)) throw NumericError("bce loss needs p strictly inside (0,1)");
        total -= a * std::log(p) + (1 - a) * std::log1p(-p);
      }
    }
  }
  return total;
}

Graph sample_graph(const Decoder& decoder, const Vector& seed, int n_nodes, EdgeSampler& sampler) {
  auto seq = decoder.sample(seed, n_nodes, sampler);
  std::vector<NodeId> ids(n_nodes);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  return from_adjacency_sequence(seq, std::move(ids));
}

}  // namespace evonet
