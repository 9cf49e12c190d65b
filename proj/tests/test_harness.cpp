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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evonet/errors.hpp"
#include "evonet/harness.hpp"

using namespace evonet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("evonet_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig tiny(const fs::path& out) {
  ExperimentConfig c;
  c.dataset.synthetic = {Family::path, GrowthMode::grow, 20};
  c.model.hidden_dim = 4;
  c.model.window_size = 3;
  c.model.max_nodes = 32;
  c.model.size_hidden = 6;
  c.model.epochs = 1;
  c.estimator_iterations = 20;
  c.output_dir = out.string();
  return c;
}

KernelReport report_of(double mean, double p90) {
  KernelReport r;
  r.mean = mean;
  r.p90 = p90;
  return r;
}

}  // namespace

TEST(Config, RoundTripAndUnknownKeys) {
  auto c = tiny("x");
  c.baselines = {BaselineKind::ba, BaselineKind::kron_rand};
  c.wl.iterations = 2;
  const auto back = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  auto j = c.to_json();
  j["learning_rate"] = 1;
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
  j = c.to_json();
  j["dataset"]["colour"] = "red";
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
  j = c.to_json();
  j["model"]["widht"] = 3;
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
  j = c.to_json();
  j["baselines"] = {"er", "ws"};
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"dataset", {{"source", "file"}}}}), ConfigError);
}

TEST(Compare, SingleRowIsBest) {
  const auto t = compare_report({{"evonet", report_of(0.5, 0.6)}});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_TRUE(t.rows[0].best_mean);
  EXPECT_TRUE(t.rows[0].best_p90);
  EXPECT_THROW(compare_report({}), ConfigError);
}

TEST(Compare, MarksColumnMaxima) {
  const auto t = compare_report({{"a", report_of(0.2, 0.9)}, {"b", report_of(0.7, 0.8)}, {"c", report_of(0.7, 0.1)}});
  EXPECT_FALSE(t.rows[0].best_mean);
  EXPECT_TRUE(t.rows[0].best_p90);
  EXPECT_TRUE(t.rows[1].best_mean);
  EXPECT_TRUE(t.rows[2].best_mean);
  EXPECT_EQ(t.to_csv().substr(0, t.to_csv().find('\n')), "method,mean,p90,best_mean,best_p90");
  EXPECT_NE(t.to_markdown().find("| b | **0.70** | 0.80 |"), std::string::npos);
}

TEST(Compare, ReferenceFixtureOrdering) {
  const auto refs = load_reference_reports(EVONET_FIXTURE_DIR "/btc_otc_reference.json");
  ASSERT_EQ(refs.size(), 7u);
  const auto t = compare_report(refs);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.best_mean, row.method == "EvoNet") << row.method;
    EXPECT_EQ(row.best_p90, row.method == "EvoNet") << row.method;
  }
  EXPECT_EQ(t.rows.front().method, "ER");
  EXPECT_DOUBLE_EQ(t.rows[4].mean, 0.62);
  EXPECT_THROW(load_reference_reports("/nonexistent/ref.json"), DataError);
}

TEST(Experiment, ArtifactsAndSizeCurve) {
  const auto dir = scratch("artifacts");
  const auto res = run_experiment(tiny(dir));
  ASSERT_EQ(res.methods.size(), 3u);
  EXPECT_EQ(res.methods[0].method, "evonet");
  EXPECT_EQ(res.methods[1].method, "er");
  EXPECT_EQ(res.plan.test_targets.size(), 4u);
  for (const auto& m : res.methods) EXPECT_EQ(m.predictions.size(), 4u);
  // Path grow starts at P3 and adds one node per step.
  for (std::size_t k = 0; k < res.sizes.steps.size(); ++k) EXPECT_EQ(res.sizes.truth[k], static_cast<int>(res.sizes.steps[k]) + 3);
  for (const char* f : {"config.json", "checkpoint.json", "training.json", "report_evonet.json", "predictions_er.jsonl",
                        "histogram_sbm.csv", "size_curve.csv", "size_curve.svg", "pca.csv", "embeddings.csv",
                        "comparison.md", "comparison.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto csv = slurp(dir / "size_curve.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,predicted_nodes,true_nodes,abs_error");
  EXPECT_EQ(res.pca.points.size(), 20u);
  fs::remove_all(dir);
}

TEST(Experiment, RerunsAreByteIdentical) {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  run_experiment(tiny(a));
  run_experiment(tiny(b));
  for (const char* f : {"checkpoint.json", "report_evonet.json", "report_er.json", "report_sbm.json", "pca.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, ErrorsNameTheStage) {
  auto cfg = tiny(scratch("errors"));
  cfg.dataset.source = DatasetSource::file;
  cfg.dataset.path = "/nonexistent/seq.jsonl";
  try {
    run_experiment(cfg);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("dataset: ", 0), 0u) << e.what();
  }
  cfg = tiny(scratch("errors"));
  cfg.dataset.synthetic.steps = 4;
  try {
    run_experiment(cfg);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("split: ", 0), 0u) << e.what();
  }
}

TEST(Paths, OutputRootEnvironment) {
  ::setenv("EVONET_OUTPUT_ROOT", "/tmp/root", 1);
  EXPECT_EQ(resolve_output_dir("run1"), "/tmp/root/run1");
  EXPECT_EQ(resolve_output_dir("/abs/run"), "/abs/run");
  ::unsetenv("EVONET_OUTPUT_ROOT");
  EXPECT_EQ(resolve_output_dir("run1"), "run1");
}
