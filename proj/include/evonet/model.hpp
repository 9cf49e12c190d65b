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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "evonet/decoder.hpp"
#include "evonet/encoder.hpp"
#include "evonet/graph.hpp"
#include "evonet/predictor.hpp"
#include "json.hpp"

namespace evonet {

enum class OptimizerKind { sgd, adam };

struct ModelConfig {
  int hidden_dim = 64;
  int depth_K = 2;
  bool tie_weights = false;
  int set2set_steps = 3;
  int window_size = 10;
  int max_nodes = 512;
  int size_hidden = 32;
  int edge_attr_dim = 1;
  LossForm loss_form = LossForm::bce;
  OptimizerKind optimizer = OptimizerKind::sgd;
  int epochs = 10;
  double step_size = 1e-3;
  double size_loss_weight = 1.0;
  double split_fraction = 0.8;
  bool validation = false;
  std::uint64_t seed = 7;

  nlohmann::json to_json() const;
  /// Reads known keys over the defaults; unknown keys throw ConfigError.
  static ModelConfig from_json(const nlohmann::json& j);
  /// Keys accepted by from_json.
  static const std::vector<std::string>& keys();
};

struct SplitPlan {
  std::size_t train_end = 0;                 // first test index
  std::vector<std::size_t> train_targets;    // indices predicted during training
  std::vector<std::size_t> validation_targets;
  std::vector<std::size_t> test_targets;
};

/// Targets are snapshot indices t >= w; t < floor(fraction * length) trains.
/// With `validation`, the last 10% of the training targets are held out.
SplitPlan plan_split(std::size_t length, int window, double fraction, bool validation = false);

std::vector<SizePoint> size_history(const GraphSequence& seq, std::size_t begin, std::size_t end);

struct Prediction {
  Graph graph;  // node ids 0..n-1, degree attributes
  int predicted_nodes = 0;
  nn::Vector embedding;
};

/// Encoder, predictor (with size head) and decoder sharing one parameter store.
class Model {
 public:
  explicit Model(const ModelConfig& cfg);
  Model(Model&&) = default;
  Model& operator=(Model&&) = default;

  const ModelConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return store_; }
  const nn::ParamStore& params() const { return store_; }
  const Encoder& encoder() const { return encoder_; }
  const Predictor& predictor() const { return predictor_; }
  const Decoder& decoder() const { return decoder_; }
  const SizeScales& size_scales() const { return scales_; }
  void set_size_scales(const SizeScales& s) { scales_ = s; }

  struct WindowLoss {
    nn::Var total, edges, size;
  };
  /// Full-pipeline loss for predicting snapshot `target` from the w before it.
  WindowLoss window_loss(ad::Tape& tape, const GraphSequence& seq, std::size_t target) const;

  nn::Vector predicted_embedding(const GraphSequence& seq, std::size_t target) const;
  Prediction predict(const GraphSequence& seq, std::size_t target, EdgeSampler& sampler) const;

  nlohmann::json checkpoint() const;
  static Model from_checkpoint(const nlohmann::json& j);

 private:
  void check_target(const GraphSequence& seq, std::size_t target) const;

  ModelConfig cfg_;
  nn::ParamStore store_;
  Encoder encoder_;
  Predictor predictor_;
  Decoder decoder_;
  SizeScales scales_;
};

/// Plain SGD or Adam over every tensor of a parameter store.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double step_size) : kind_(kind), step_(step_size) {}
  void step(nn::ParamStore& store);

 private:
  struct Moments {
    Eigen::MatrixXd m, v;
  };
  OptimizerKind kind_;
  double step_;
  long t_ = 0;
  std::map<std::string, Moments> moments_;
};

struct TrainReport {
  double initial_loss = 0;              // mean window loss before the first update
  std::vector<double> epoch_loss;       // mean window loss per epoch
  std::vector<double> validation_loss;  // empty unless validation is on
};

/// Jointly trains on the training split with teacher forcing inside the
/// decoder. Throws NumericError on a non-finite loss.
TrainReport train(Model& model, const GraphSequence& seq, std::ostream* log = nullptr);

}  // namespace evonet
