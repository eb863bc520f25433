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
#ifndef DASCOCHLEA_SIMULATE_H_
#define DASCOCHLEA_SIMULATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dascochlea/adm_encoder.h"
#include "dascochlea/agc_controller.h"
#include "dascochlea/filterbank.h"
#include "dascochlea/gain_trace.h"

namespace dascochlea {

struct SimulationConfig {
  FilterbankConfig filterbank;
  AdmParams adm;
  AgcParams agc;

  void validate() const;
};

struct SimulateOptions {
  bool agc_on = true;
  // Runs the AGC path with every controller channel disabled, so gains stay
  // at the initial index. Used to compare the two paths bit for bit.
  bool freeze_controller = false;
  // Records this channel's filter output sample by sample.
  std::optional<int> trace_channel;
  bool record_windows = true;
};

// A chip gain setting that took effect.
struct GainApplication {
  TimestampUs time_us = 0;
  std::uint8_t channel = 0;
  std::uint8_t gain_index = 0;
};

struct SimulationResult {
  bool agc_on = true;
  ChannelRange active_channels;
  TimestampUs duration_us = 0;
  std::vector<SpikeEvent> events;
  // Controller register value over time; constant 11 without AGC.
  GainTrace gain_trace;
  std::vector<WindowRecord> windows;
  std::vector<GainApplication> applications;
  std::vector<double> analog_trace;
  std::uint64_t dropped_requests = 0;
  std::int64_t adm_cap_hits = 0;
};

// Microsecond timestamp of sample n (floor of n / fs).
TimestampUs sample_time_us(std::int64_t n, double sample_rate_hz);

// Runs audio through the active channels: filter, ADM encode, count into the
// controller, tick it every 100 us, and apply serialized gain updates.
SimulationResult simulate(std::span<const double> samples,
                          const SimulationConfig& cfg,
                          const SimulateOptions& opts = {});

}  // namespace dascochlea

#endif  // DASCOCHLEA_SIMULATE_H_
