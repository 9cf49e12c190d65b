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

#include "evonet/encoder.hpp"

#include <algorithm>
#include <numeric>

#include "evonet/errors.hpp"

namespace evonet {

using nn::Matrix;
using nn::Var;
using nn::Vector;

std::vector<int> canonical_column_order(const Matrix& m) {
  std::vector<int> order(m.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, a) < m(r, b)) return true;
      if (m(r, a) > m(r, b)) return false;
    }
    return false;
  });
  return order;
}

Encoder Encoder::create(nn::ParamStore& store, const EncoderConfig& cfg, std::mt19937_64& rng) {
  if (cfg.depth < 1) throw ConfigError("encoder depth must be >= 1");
  if (cfg.hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
  if (cfg.set2set_steps < 1) throw ConfigError("set2set_steps must be >= 1");
  Encoder enc;
  enc.cfg_ = cfg;
  const int d = cfg.hidden_dim;
  const int rounds = cfg.tie_weights ? 1 : cfg.depth;
  for (int k = 0; k < rounds; ++k) {
    const std::string tag = "encoder/round" + std::to_string(k);
    enc.mlps_.push_back(nn::Mlp::create(store, tag + "/aggregate", {d + cfg.edge_attr_dim, d, d}, rng));
    enc.grus_.push_back(nn::GruCell::create(store, tag + "/gru", d, d, false, rng));
  }
  enc.set2set_ = nn::LstmCell::create(store, "encoder/set2set", 2 * d, d, rng);
  return enc;
}

Matrix Encoder::initial_states(const Graph& graph) const {
  const int d = cfg_.hidden_dim;
  if (graph.node_attr_dim() > d)
    throw DimensionError("node attribute dimension " + std::to_string(graph.node_attr_dim()) +
                         " exceeds hidden_dim " + std::to_string(d));
  Matrix h = Matrix::Zero(d, graph.num_nodes());
  h.topRows(graph.node_attr_dim()) = graph.node_attrs().transpose();
  return h;
}

Var Encoder::messages(ad::Tape& tape, int round, const Var& states, const Graph& graph) const {
  const int m = graph.num_edges();
  std::vector<int> src, dst;
  src.reserve(2 * m);
  dst.reserve(2 * m);
  for (const auto& e : graph.edges()) {
    src.push_back(e.u);
    dst.push_back(e.v);
    src.push_back(e.v);
    dst.push_back(e.u);
  }
  Var inputs = ad::gather_columns(states, src);
  if (cfg_.edge_attr_dim > 0) {
    if (graph.edge_attr_dim() != cfg_.edge_attr_dim)
      throw DimensionError("graph edge attribute dimension " + std::to_string(graph.edge_attr_dim()) +
                           " does not match encoder edge_attr_dim " + std::to_string(cfg_.edge_attr_dim));
    Matrix l(cfg_.edge_attr_dim, 2 * m);
    for (int k = 0; k < m; ++k) {
      l.col(2 * k) = graph.edge_attrs().row(k).transpose();
      l.col(2 * k + 1) = graph.edge_attrs().row(k).transpose();
    }
    inputs = ad::concat_rows(inputs, tape.constant(std::move(l)));
  }
  return ad::scatter_add_columns(mlp(round).forward(tape, inputs), dst, graph.num_nodes());
}

Var Encoder::node_states(ad::Tape& tape, const Graph& graph) const {
  Var h = tape.constant(initial_states(graph));
  for (int k = 0; k < cfg_.depth; ++k) {
    Var msg = messages(tape, k, h, graph);
    h = gru(k).forward(tape, msg, h);
  }
  return h;
}

Var Encoder::readout(ad::Tape& tape, const Var& states) const {
  if (states.cols() == 0) throw DimensionError("readout of an empty node set");
  const int d = cfg_.hidden_dim;
  Var sorted = ad::gather_columns(states, canonical_column_order(states.value()));
  Var q_star = tape.constant(Matrix::Zero(2 * d, 1));
  auto state = set2set_.zero_state(tape);
  for (int t = 0; t < cfg_.set2set_steps; ++t) {
    state = set2set_.step(tape, state, q_star);
    Var scores = ad::matmul(ad::transpose(state.h), sorted);
    Var attention = ad::softmax(scores);
    Var read = ad::matmul(sorted, ad::transpose(attention));
    q_star = ad::concat_rows(state.h, read);
  }
  return q_star;
}

Var Encoder::encode(ad::Tape& tape, const Graph& graph) const {
  if (graph.num_nodes() == 0) throw DimensionError("cannot encode an empty graph");
  return readout(tape, node_states(tape, graph));
}

Vector Encoder::encode(const Graph& graph) const {
  ad::Tape tape;
  return encode(tape, graph).value().col(0);
}

Vector aggregate(std::span<const Vector> neighbor_states, const nn::Mlp& mlp, int out_dim) {
  if (neighbor_states.empty()) return Vector::Zero(out_dim);
  Matrix in(neighbor_states[0].size(), static_cast<Eigen::Index>(neighbor_states.size()));
  for (std::size_t k = 0; k < neighbor_states.size(); ++k) in.col(static_cast<Eigen::Index>(k)) = neighbor_states[k];
  Matrix out = mlp.eval(in);
  Vector total = Vector::Zero(out.rows());
  for (int c : canonical_column_order(out)) total += out.col(c);
  return total;
}

Vector gru_update(const Vector& h, const Vector& m, const nn::GruCell& cell) {
  if (h.size() != m.size()) throw DimensionError("gru_update: state and message widths differ");
  return cell.eval(m, h).col(0);
}

Vector set2set_readout(const Matrix& node_states, const nn::LstmCell& cell, int steps) {
  if (node_states.cols() == 0) throw DimensionError("readout of an empty node set");
  const auto d = node_states.rows();
  Matrix sorted(d, node_states.cols());
  const auto order = canonical_column_order(node_states);
  for (std::size_t k = 0; k < order.size(); ++k) sorted.col(static_cast<Eigen::Index>(k)) = node_states.col(order[k]);
  Matrix q_star = Matrix::Zero(2 * d, 1);
  nn::LstmCell::PlainState state{Matrix::Zero(d, 1), Matrix::Zero(d, 1)};
  for (int t = 0; t < steps; ++t) {
    state = cell.step(state, q_star);
    Eigen::RowVectorXd scores = state.h.transpose() * sorted;
    scores = (scores.array() - scores.maxCoeff()).exp();
    scores /= scores.sum();
    Matrix read = sorted * scores.transpose();
    q_star.resize(2 * d, 1);
    q_star << state.h, read;
  }
  return q_star.col(0);
}

}  // namespace evonet
