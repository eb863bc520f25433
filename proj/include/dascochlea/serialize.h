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
#ifndef DASCOCHLEA_SERIALIZE_H_
#define DASCOCHLEA_SERIALIZE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "dascochlea/analysis.h"
#include "dascochlea/classifiers.h"
#include "dascochlea/experiment.h"
#include "dascochlea/features.h"
#include "dascochlea/simulate.h"

namespace dascochlea {

// CSV columns: f0..f151, label, recording_id, amplitude_mV, agc.
void write_features_csv(const std::filesystem::path& path, const FeatureSet& set);
FeatureSet read_features_csv(const std::filesystem::path& path);

// time_us,channel,gain_index
void write_gain_trace_csv(const std::filesystem::path& path, const GainTrace& trace);
// time_us,channel,spike_count,decision,gain_index
void write_windows_csv(const std::filesystem::path& path, std::span<const WindowRecord> windows);
void write_rate_analysis_csv(const std::filesystem::path& path, const RateAnalysis& ra);
// amplitude_mV,freq_hz,gain_db ("below_floor" when unmeasurable)
void write_freq_response_csv(const std::filesystem::path& path, const GainGrid& grid);

// A trained classifier with the normalizer it expects. Stored as JSON:
// {"format","version","kind","input_dim","hidden","outputs","seed",
//  "config_hash","agc","normalizer":{"mean","stddev"},"parameters"}.
// LR parameters are the weights followed by the bias; DNN parameters use
// the flat layout of Mlp::parameters().
struct Checkpoint {
  std::variant<LogisticRegression<double>, Mlp<float>> model;
  FeatureNormalizer normalizer;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  bool agc = true;

  std::string kind() const;
  Eigen::VectorXi predict(const Eigen::MatrixXd& raw_features) const;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dascochlea

#endif  // DASCOCHLEA_SERIALIZE_H_
