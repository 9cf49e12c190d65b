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

#include "evonet/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "evonet/errors.hpp"

namespace evonet {

using nn::Matrix;
using nn::Var;
using nn::Vector;

SizeScales fit_size_scales(std::span<const SizePoint> history) {
  SizeScales s;
  for (std::size_t t = 1; t < history.size(); ++t) {
    s.nodes = std::max(s.nodes, std::abs(static_cast<double>(history[t].first - history[t - 1].first)));
    s.edges = std::max(s.edges, std::abs(static_cast<double>(history[t].second - history[t - 1].second)));
  }
  return s;
}

Matrix size_features(std::span<const SizePoint> window, const SizeScales& scales) {
  if (window.empty()) throw DimensionError("size history is empty");
  const auto& last = window.back();
  Matrix f(2 * static_cast<Eigen::Index>(window.size()), 1);
  for (std::size_t t = 0; t < window.size(); ++t) {
    f(2 * t, 0) = (window[t].first - last.first) / scales.nodes;
    f(2 * t + 1, 0) = (window[t].second - last.second) / scales.edges;
  }
  return f;
}

int size_from_output(double output, std::span<const SizePoint> window, const SizeScales& scales) {
  double n = window.back().first + scales.nodes * output;
  if (!std::isfinite(n)) return 1;
  n = std::clamp(n, 1.0, 1e9);
  return std::max(1, static_cast<int>(std::lround(n)));
}

Predictor Predictor::create(nn::ParamStore& store, const PredictorConfig& cfg, std::mt19937_64& rng) {
  if (cfg.window_size < 1) throw ConfigError("window_size must be >= 1");
  Predictor p;
  p.cfg_ = cfg;
  p.lstm_ = nn::LstmCell::create(store, "predictor/lstm", cfg.embedding_dim, cfg.embedding_dim, rng);
  p.out_ = nn::Linear::create(store, "predictor/out", cfg.embedding_dim, cfg.embedding_dim, true, rng);
  p.size_mlp_ = nn::Mlp::create(store, "predictor/size",
                                {2 * cfg.window_size, cfg.size_hidden, cfg.size_hidden, 1}, rng);
  return p;
}

void Predictor::check_window(std::size_t length) const {
  if (static_cast<int>(length) != cfg_.window_size)
    throw DimensionError("window holds " + std::to_string(length) + " entries, expected " +
                         std::to_string(cfg_.window_size));
}

nn::LstmCell::State Predictor::recurrent_step(ad::Tape& tape, const nn::LstmCell::State& state, const Var& x) const {
  return lstm_.step(tape, state, x);
}

nn::LstmCell::PlainState Predictor::recurrent_step(const nn::LstmCell::PlainState& state, const Vector& x) const {
  return lstm_.step(state, x);
}

Var Predictor::predict_embedding(ad::Tape& tape, std::span<const Var> window) const {
  check_window(window.size());
  auto state = lstm_.zero_state(tape);
  for (const auto& x : window) state = lstm_.step(tape, state, x);
  return out_.forward(tape, state.h);
}

Vector Predictor::predict_embedding(std::span<const Vector> window) const {
  check_window(window.size());
  const int e = cfg_.embedding_dim;
  nn::LstmCell::PlainState state{Matrix::Zero(e, 1), Matrix::Zero(e, 1)};
  for (const auto& x : window) state = lstm_.step(state, x);
  return out_.eval(state.h).col(0);
}

Var Predictor::size_output(ad::Tape& tape, std::span<const SizePoint> window, const SizeScales& scales) const {
  check_window(window.size());
  return size_mlp_.forward(tape, tape.constant(size_features(window, scales)));
}

int Predictor::predict_size(std::span<const SizePoint> window, const SizeScales& scales) const {
  check_window(window.size());
  const double out = size_mlp_.eval(size_features(window, scales))(0, 0);
  return size_from_output(out, window, scales);
}

}  // namespace evonet
