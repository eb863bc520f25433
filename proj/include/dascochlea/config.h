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
#ifndef DASCOCHLEA_CONFIG_H_
#define DASCOCHLEA_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dascochlea/analysis.h"
#include "dascochlea/experiment.h"
#include "dascochlea/simulate.h"

namespace dascochlea {

struct RateSweepConfig {
  int channel = 30;
  std::optional<double> freq_hz;  // channel center when unset
  double lo_mV = 1.0;
  double hi_mV = 100.0;
  int count = 20;
  RateAnalysisOptions timing;
};

struct FreqResponseConfig {
  int channel = 30;
  int gain_index = kMaxGainIndex;
  std::vector<double> amplitudes_mV = {1, 10, 100};
  double f_lo_hz = 50.0;
  double f_hi_hz = 5000.0;
  int f_count = 41;
  double v_noise = 0.0;
};

struct AppConfig {
  SimulationConfig sim;
  ExperimentSpec experiment;
  RateSweepConfig rate;
  FreqResponseConfig freq_response;
};

// Every key is optional; unknown keys are rejected. The schema is listed in
// README.md.
AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::filesystem::path& path);
// Canonical JSON (sorted keys) with every field spelled out.
std::string config_to_json(const AppConfig& cfg);
// 64-bit FNV-1a of the canonical JSON.
std::uint64_t config_hash(const AppConfig& cfg);
std::uint64_t fnv1a64(const std::string& bytes);

// Accepts "first-last" channel indices, "<f>hz-<f>khz" style frequency
// bounds (nearest channels), or the preset "56hz-4khz" (channels 12-47).
ChannelRange parse_channel_range(const std::string& text, const FilterbankConfig& cfg);

}  // namespace dascochlea

#endif  // DASCOCHLEA_CONFIG_H_
