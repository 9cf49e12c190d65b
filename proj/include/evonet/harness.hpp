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

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "evonet/baselines.hpp"
#include "evonet/eval.hpp"
#include "evonet/ingest.hpp"
#include "evonet/model.hpp"
#include "evonet/synthetic.hpp"
#include "json.hpp"

namespace evonet {

enum class DatasetSource { synthetic, file, ingest };

/// JSON schema (all keys optional unless noted):
///   {"source": "synthetic", "family": "path|cycle|ladder", "mode": "grow|grow-with-removal", "steps": 1000}
///   {"source": "file", "path": "seq.jsonl"}                                   (path required)
///   {"source": "ingest", "path": "edges.csv", "format": "btc|plain", "snapshots": 1000,
///    "snapshot_mode": "cumulative|sliding", "attribute": "degree|avg_rating", "take": 0}
/// `take` > 0 keeps only the first `take` snapshots.
struct DatasetConfig {
  DatasetSource source = DatasetSource::synthetic;
  SyntheticScenario synthetic;
  std::string path;
  EdgeFormat format = EdgeFormat::btc;
  SnapshotSpec snapshots;
  int take = 0;

  nlohmann::json to_json() const;
  static DatasetConfig from_json(const nlohmann::json& j);
};

/// Top-level keys: dataset, model (ModelConfig keys), baselines, output_dir,
/// wl_iterations, label_rule, bin_width, sampling ("bernoulli"|"threshold"),
/// estimator_iterations. Unknown keys throw ConfigError.
struct ExperimentConfig {
  DatasetConfig dataset;
  ModelConfig model;
  std::vector<BaselineKind> baselines = {BaselineKind::er, BaselineKind::sbm};
  std::string output_dir = "evonet-out";
  WLConfig wl;
  std::string sampling = "bernoulli";
  int estimator_iterations = 400;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
};

GraphSequence load_dataset(const DatasetConfig& cfg, int window_size);

/// Edge sampler for one test target; seeded per target so parallel and serial runs agree.
EdgeSampler make_sampler(const std::string& sampling, std::uint64_t seed, std::size_t target);

struct MethodResult {
  std::string method;
  std::vector<Graph> predictions;  // one per test target
  KernelReport report;
};

struct ExperimentResult {
  SplitPlan plan;
  TrainReport training;
  std::vector<MethodResult> methods;  // "evonet" first, then baselines in config order
  SizeCurve sizes;                    // model node counts vs truth
  SizeCurve baseline_sizes;           // shared estimator node counts vs truth
  PcaResult pca;                      // encoder embeddings of every snapshot
  std::vector<std::string> artifacts; // file names written under output_dir
};

/// Trains, predicts every test target, runs the baselines on the same
/// targets, scores and writes artifacts. Errors keep their family and name
/// the failing stage.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Writes artifacts for a finished result into cfg.output_dir.
std::vector<std::string> write_artifacts(const ExperimentConfig& cfg, const GraphSequence& seq,
                                         const Model& model, const ExperimentResult& result);

struct ComparisonRow {
  std::string method;
  double mean = 0, p90 = 0;
  bool best_mean = false, best_p90 = false;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  /// Maxima in bold.
  std::string to_markdown() const;
  /// Columns: method,mean,p90,best_mean,best_p90.
  std::string to_csv() const;
};

/// One row per method in input order; every row attaining a column maximum is marked.
/// Throws ConfigError on empty input.
ComparisonTable compare_report(const std::vector<std::pair<std::string, KernelReport>>& reports);

/// Stored summaries {"methods": [{"method", "mean", "p90"}, ...]} as reports with empty similarity lists.
std::vector<std::pair<std::string, KernelReport>> load_reference_reports(const std::string& path);

/// Output root: $EVONET_OUTPUT_ROOT joined with a relative dir, else the dir itself.
std::string resolve_output_dir(const std::string& dir);

}  // namespace evonet
