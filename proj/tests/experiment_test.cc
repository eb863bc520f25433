/* Copyright 2026 The dascochlea Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "dascochlea/experiment.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace dascochlea {
namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  SyntheticCorpus syn;
  syn.spec.train_minutes = 0.2;
  syn.spec.test_minutes = 0.2;
  syn.seed = 3;
  spec.corpus = syn;
  spec.train_amplitudes_mV = {15};
  spec.test_amplitudes_mV = {5, 50};
  spec.include_all = false;
  spec.agc = AgcMode::kOn;
  spec.classifier = ClassifierKind::kLr;
  spec.seeds = {0};
  return spec;
}

TEST(ExperimentSpec, DefaultsAndValidation) {
  const ExperimentSpec d;
  EXPECT_EQ(d.train_amplitudes_mV, (std::vector<double>{5, 10, 15, 50, 80}));
  EXPECT_EQ(d.test_amplitudes_mV, (std::vector<double>{2, 2.5, 5, 7, 10, 15, 20, 30, 50, 80}));
  EXPECT_EQ(d.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(d.frame_ms, 400);
  ExperimentSpec bad = d;
  bad.test_amplitudes_mV = {5, 0};
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = d;
  bad.seeds.clear();
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(ModeNames, ParseAndPrint) {
  EXPECT_EQ(parse_agc_mode("both"), AgcMode::kBoth);
  EXPECT_STREQ(to_string(parse_agc_mode("off")), "off");
  EXPECT_EQ(parse_classifier("dnn"), ClassifierKind::kDnn);
  EXPECT_THROW(parse_classifier("svm"), InvalidArgument);
  EXPECT_EQ(condition_label(15), "15mV");
  EXPECT_EQ(condition_label(2.5), "2.5mV");
}

TEST(RunExperiment, MatrixSizeForTinySpec) {
  const auto report = run_experiment(tiny_spec(), SimulationConfig{});
  ASSERT_EQ(report.cells.size(), 2u);
  EXPECT_EQ(report.failed_cells, 0);
  for (const auto& c : report.cells) {
    EXPECT_EQ(c.status, "ok");
    EXPECT_EQ(c.train_condition, "15mV");
    EXPECT_GT(c.frames, 0u);
    EXPECT_GE(c.accuracy, 0.0);
    EXPECT_LE(c.accuracy, 1.0);
  }
  ASSERT_EQ(report.mean_table.size(), 1u);
  EXPECT_TRUE(report.relative_error.empty());
}

TEST(RunExperiment, AllRowMeansAndRelativeError) {
  ExperimentSpec spec = tiny_spec();
  spec.include_all = true;
  spec.train_amplitudes_mV = {5, 50};
  spec.agc = AgcMode::kBoth;
  spec.seeds = {0, 1};
  FeatureCache cache;
  int simulations = 0;
  const auto progress = [&](const std::string& msg) {
    simulations += msg.rfind("features", 0) == 0;
  };
  const auto report = run_experiment(spec, SimulationConfig{}, progress, &cache);
  EXPECT_EQ(report.cells.size(), 3u * 2u * 2u * 2u);
  bool has_all = false;
  for (const auto& row : report.mean_table) {
    has_all |= row.train_condition == "all";
    double sum = 0.0;
    for (double v : row.per_amplitude) sum += v;
    EXPECT_NEAR(row.mean, sum / row.per_amplitude.size(), 1e-12);
    // Each column is the seed average of its cells.
    for (std::size_t k = 0; k < report.test_amplitudes_mV.size(); ++k) {
      double cell_sum = 0.0;
      int n = 0;
      for (const auto& c : report.cells) {
        if (c.train_condition == row.train_condition && c.agc == row.agc &&
            c.classifier == row.classifier && c.test_amplitude_mV == report.test_amplitudes_mV[k]) {
          cell_sum += c.accuracy;
          ++n;
        }
      }
      EXPECT_EQ(n, 2);
      EXPECT_NEAR(row.per_amplitude[k], cell_sum / n, 1e-12);
    }
  }
  EXPECT_TRUE(has_all);
  ASSERT_EQ(report.relative_error.size(), 3u);
  for (const auto& r : report.relative_error) {
    if (r.mean_acc_non_agc < 1.0) {
      EXPECT_NEAR(r.relative_error_decrease,
                  100.0 * (r.mean_acc_agc - r.mean_acc_non_agc) / (1.0 - r.mean_acc_non_agc),
                  1e-9);
    }
  }

  // A second run with the filled cache simulates nothing and agrees exactly.
  const int first_run = simulations;
  EXPECT_GT(first_run, 0);
  const auto again = run_experiment(spec, SimulationConfig{}, progress, &cache);
  EXPECT_EQ(simulations, first_run);
  for (std::size_t i = 0; i < again.cells.size(); ++i) {
    EXPECT_EQ(again.cells[i].accuracy, report.cells[i].accuracy);
  }
}

TEST(RunExperiment, FailedCellsAreRecordedAndRunContinues) {
  ExperimentSpec spec = tiny_spec();
  spec.classifier = ClassifierKind::kBoth;
  spec.dnn.dropout = 1.5;
  const auto report = run_experiment(spec, SimulationConfig{});
  ASSERT_EQ(report.cells.size(), 4u);
  EXPECT_EQ(report.failed_cells, 1);
  for (const auto& c : report.cells) {
    if (c.classifier == "lr") {
      EXPECT_EQ(c.status, "ok");
    } else {
      EXPECT_EQ(c.status.rfind("failed:", 0), 0u);
      EXPECT_TRUE(std::isnan(c.accuracy));
    }
  }
}

TEST(WriteReport, EmitsThreeCsvFiles) {
  ExperimentReport r;
  r.test_amplitudes_mV = {5, 50};
  for (bool agc : {true, false}) {
    r.cells.push_back({"15mV", agc, "lr", 0, 5, agc ? 0.9 : 0.8, 10, "ok"});
    r.cells.push_back({"15mV", agc, "lr", 0, 50, agc ? 0.8 : 0.6, 10, "ok"});
  }
  summarize(r);
  ASSERT_EQ(r.mean_table.size(), 2u);
  EXPECT_NEAR(r.mean_table[0].mean, 0.85, 1e-12);
  ASSERT_EQ(r.relative_error.size(), 1u);
  EXPECT_NEAR(r.relative_error[0].relative_error_decrease, 50.0, 1e-9);
  EXPECT_NEAR(r.relative_error[0].mean_seed_decrease, 50.0, 1e-9);

  const auto dir = std::filesystem::temp_directory_path() / "dascochlea_report_test";
  std::filesystem::remove_all(dir);
  write_report(r, dir);
  for (const char* f : {"accuracy_cells.csv", "mean_accuracy.csv", "relative_error.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "accuracy_cells.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 5);
  std::filesystem::remove_all(dir);
}

TEST(ExtractFeatures, RowsCarryMetadata) {
  RecordingSpec rec{"clip", Label::kNoise, SourceKind::kTones, 1.0, 4, {}};
  const std::vector<RecordingSpec> recs = {rec};
  const std::vector<double> amps = {5, 20};
  const FeatureSet on = extract_features(recs, amps, true, SimulationConfig{});
  EXPECT_EQ(on.rows(), 4);
  EXPECT_EQ(on.x.cols(), 152);
  EXPECT_EQ(on.labels, Eigen::VectorXi::Zero(4));
  EXPECT_EQ(on.amplitude_mV, (std::vector<double>{5, 5, 20, 20}));
  EXPECT_EQ(on.recording_id[0], "clip");
  const FeatureSet off = extract_features(recs, amps, false, SimulationConfig{});
  EXPECT_TRUE((off.x.rightCols(36).array() == 11.0).all());
  EXPECT_EQ(on.subset(std::vector<double>{20}).rows(), 2);
}

}  // namespace
}  // namespace dascochlea
