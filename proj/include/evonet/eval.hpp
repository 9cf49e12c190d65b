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

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evonet/graph.hpp"
#include "evonet/kernels.hpp"
#include "json.hpp"

namespace evonet {

enum class LabelRule { degree, binned_attribute };

LabelRule parse_label_rule(const std::string& s);
std::string to_string(LabelRule r);

struct WLConfig {
  int iterations = 3;
  LabelRule label_rule = LabelRule::degree;
  double bin_width = 1.0;  // binned_attribute: label = round(attr0 / bin_width)
};

/// Initial integer labels. Throws DataError if the rule needs an attribute
/// column the graph lacks; ConfigError for h < 0 or bin_width <= 0.
std::vector<std::int64_t> initial_labels(const Graph& g, const WLConfig& cfg);

/// Shared compression dictionary; label ids are unique across rounds.
class WLDictionary {
 public:
  /// Counts of compressed labels over rounds 0..h for one graph.
  kernels::LabelCounts features(const Graph& g, const WLConfig& cfg);

 private:
  std::map<std::pair<int, std::vector<std::int64_t>>, std::int64_t> table_;
};

/// Unnormalized kernel: number of matching compressed-label pairs.
std::int64_t wl_kernel_count(const Graph& g1, const Graph& g2, const WLConfig& cfg = {});
/// k(g1,g2) / sqrt(k(g1,g1) k(g2,g2)); throws DataError on an empty graph.
double wl_subtree_kernel(const Graph& g1, const Graph& g2, const WLConfig& cfg = {});

/// Normalized Gram matrix over a shared dictionary.
Eigen::MatrixXd wl_gram(std::span<const Graph> graphs, const WLConfig& cfg = {},
                        kernels::Exec exec = kernels::Exec::parallel);

/// Normalized similarity of predicted[k] against truth[k] for every k.
std::vector<double> pairwise_similarity(std::span<const Graph> predicted,
                                        std::span<const Graph> truth, const WLConfig& cfg = {},
                                        kernels::Exec exec = kernels::Exec::parallel);

struct KernelReport {
  static constexpr int kBins = 20;
  std::vector<double> similarities;
  double mean = 0;
  double p90 = 0;
  std::array<int, kBins> histogram{};

  nlohmann::json to_json() const;
  static KernelReport from_json(const nlohmann::json& j);
};

/// Mean, nearest-rank 90th percentile and 20-bin histogram over [0,1].
/// Value 1.0 falls in the last bin. Throws DataError on empty input.
KernelReport summarize_similarities(std::vector<double> similarities);

/// Throws DataError on length mismatch.
KernelReport similarity_report(std::span<const Graph> predicted, std::span<const Graph> truth,
                               const WLConfig& cfg = {});

struct SizeCurve {
  std::vector<std::size_t> steps;
  std::vector<int> predicted;
  std::vector<int> truth;

  double mean_abs_error() const;
  int max_abs_error() const;
  /// Fraction of steps with |pred - true| <= tol.
  double fraction_within(int tol) const;
  /// Columns: step,predicted_nodes,true_nodes,abs_error.
  std::string to_csv() const;
};

SizeCurve size_curve(std::span<const Graph> predicted, std::span<const Graph> truth,
                     std::span<const std::size_t> steps = {});

struct PcaResult {
  std::vector<std::array<double, 2>> points;
  std::array<double, 2> explained{};  // fraction of total variance per component
  Eigen::VectorXd eigenvalues;        // covariance spectrum, descending
  Eigen::MatrixXd components;         // dim x 2
  Eigen::VectorXd mean;
};

/// Rows of the result follow the input order. Needs >= 2 vectors of equal
/// dimension; zero-variance input yields zero components and points.
PcaResult pca_project(std::span<const Eigen::VectorXd> embeddings);

}  // namespace evonet
