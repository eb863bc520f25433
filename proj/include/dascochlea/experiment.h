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
#ifndef DASCOCHLEA_EXPERIMENT_H_
#define DASCOCHLEA_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dascochlea/classifiers.h"
#include "dascochlea/corpus.h"
#include "dascochlea/simulate.h"

namespace dascochlea {

enum class AgcMode { kOn, kOff, kBoth };
enum class ClassifierKind { kLr, kDnn, kBoth };

const char* to_string(AgcMode m);
const char* to_string(ClassifierKind c);
AgcMode parse_agc_mode(const std::string& s);
ClassifierKind parse_classifier(const std::string& s);

struct SyntheticCorpus {
  CorpusSpec spec;
  std::uint64_t seed = 0;
};

struct ExperimentSpec {
  std::variant<SyntheticCorpus, std::filesystem::path> corpus = SyntheticCorpus{};
  std::vector<double> train_amplitudes_mV = {5, 10, 15, 50, 80};
  std::vector<double> test_amplitudes_mV = {2, 2.5, 5, 7, 10, 15, 20, 30, 50, 80};
  bool include_all = true;
  AgcMode agc = AgcMode::kBoth;
  ClassifierKind classifier = ClassifierKind::kBoth;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5};
  int frame_ms = 400;
  std::filesystem::path output_dir = "out";
  TrainConfig dnn;
  LrConfig lr;

  void validate() const;
};

// Frames of a set of recordings, one row per frame.
struct FeatureSet {
  bool agc = true;
  Eigen::MatrixXd x;
  Eigen::VectorXi labels;
  std::vector<double> amplitude_mV;
  std::vector<std::string> recording_id;

  Eigen::Index rows() const { return x.rows(); }
  // Rows whose amplitude is in `amplitudes`.
  FeatureSet subset(std::span<const double> amplitudes) const;
};

using ProgressFn = std::function<void(const std::string&)>;

// Normalizes every recording to each amplitude, simulates it and frames
// the result.
FeatureSet extract_features(std::span<const RecordingSpec> recordings,
                            std::span<const double> amplitudes_mV, bool agc,
                            const SimulationConfig& cfg, int frame_ms = 400,
                            const ProgressFn& progress = {});

Corpus load_corpus(const ExperimentSpec& spec);

struct AccuracyCell {
  std::string train_condition;  // amplitude label or "all"
  bool agc = true;
  std::string classifier;
  std::uint64_t seed = 0;
  double test_amplitude_mV = 0.0;
  double accuracy = 0.0;
  std::size_t frames = 0;
  std::string status = "ok";
};

// One row per (train condition, agc, classifier): seed-averaged accuracy
// per test amplitude and their unweighted mean.
struct MeanAccuracyRow {
  std::string train_condition;
  bool agc = true;
  std::string classifier;
  std::vector<double> per_amplitude;
  double mean = 0.0;
};

struct RelativeErrorRow {
  std::string train_condition;
  std::string classifier;
  double mean_acc_agc = 0.0;
  double mean_acc_non_agc = 0.0;
  // From the seed-averaged accuracies.
  double relative_error_decrease = 0.0;
  // Average of per-seed decreases.
  double mean_seed_decrease = 0.0;
};

struct ExperimentReport {
  std::vector<double> test_amplitudes_mV;
  std::vector<AccuracyCell> cells;
  std::vector<MeanAccuracyRow> mean_table;
  std::vector<RelativeErrorRow> relative_error;
  int failed_cells = 0;
};

std::string condition_label(double amplitude_mV);

// Pre-computed features let callers reuse simulations across experiments.
struct FeatureCache {
  std::optional<FeatureSet> train_agc, test_agc, train_non, test_non;
};

ExperimentReport run_experiment(const ExperimentSpec& spec, const SimulationConfig& cfg,
                                const ProgressFn& progress = {},
                                FeatureCache* cache = nullptr);

// Builds the mean table and relative-error summary from cells.
void summarize(ExperimentReport& report);

void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace dascochlea

#endif  // DASCOCHLEA_EXPERIMENT_H_
