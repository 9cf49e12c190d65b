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
#include <utility>
#include <vector>

#include "evonet/nn.hpp"

namespace evonet {

struct PredictorConfig {
  int embedding_dim = 128;  // 2d
  int window_size = 10;
  int size_hidden = 32;
};

/// (node count, edge count) of one snapshot.
using SizePoint = std::pair<int, int>;

/// Divisors applied to count differences before they reach a size MLP.
struct SizeScales {
  double nodes = 1.0;
  double edges = 1.0;
};

/// Scales = max |one-step change| over a size history, floored at 1.
SizeScales fit_size_scales(std::span<const SizePoint> history);

/// 2w x 1 column: ((n_t - n_last)/s_n, (m_t - m_last)/s_m) for each window entry.
nn::Matrix size_features(std::span<const SizePoint> window, const SizeScales& scales);

/// Rounds n_last + s_n * output to the nearest integer, floored at 1.
int size_from_output(double output, std::span<const SizePoint> window, const SizeScales& scales);

/// LSTM over the window of graph embeddings plus a linear map of its final
/// hidden state (the predicted next embedding), and the MLP size head.
class Predictor {
 public:
  static Predictor create(nn::ParamStore& store, const PredictorConfig& cfg, std::mt19937_64& rng);

  const PredictorConfig& config() const { return cfg_; }
  const nn::LstmCell& cell() const { return lstm_; }

  nn::LstmCell::State recurrent_step(ad::Tape& tape, const nn::LstmCell::State& state, const nn::Var& x) const;
  nn::LstmCell::PlainState recurrent_step(const nn::LstmCell::PlainState& state, const nn::Vector& x) const;

  /// Throws DimensionError unless the window holds exactly window_size embeddings of width embedding_dim.
  nn::Var predict_embedding(ad::Tape& tape, std::span<const nn::Var> window) const;
  nn::Vector predict_embedding(std::span<const nn::Vector> window) const;

  /// Raw scalar output of the size head.
  nn::Var size_output(ad::Tape& tape, std::span<const SizePoint> window, const SizeScales& scales) const;
  int predict_size(std::span<const SizePoint> window, const SizeScales& scales) const;

 private:
  void check_window(std::size_t length) const;

  PredictorConfig cfg_;
  nn::LstmCell lstm_;
  nn::Linear out_;
  nn::Mlp size_mlp_;
};

}  // namespace evonet
