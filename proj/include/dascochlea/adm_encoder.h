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
#ifndef DASCOCHLEA_ADM_ENCODER_H_
#define DASCOCHLEA_ADM_ENCODER_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dascochlea/common.h"

namespace dascochlea {

struct AdmParams {
  double delta = 1.0;
  int max_events_per_sample = 8;
  // Initial reference level as a fraction of delta. 0.5 puts the zero-mean
  // signal halfway between two thresholds.
  double reference_offset = 0.5;

  void validate() const;
};

// Per-channel asynchronous delta modulator. The encoded level always sits on
// the lattice origin + k * delta, so it never drifts.
class AdmState {
 public:
  AdmState() : AdmState(AdmParams{}) {}
  explicit AdmState(const AdmParams& params);
  AdmState(double delta, double initial_level, int max_events_per_sample = 8);

  double level() const { return origin_ + static_cast<double>(steps_) * delta_; }
  double delta() const { return delta_; }
  int max_events_per_sample() const { return max_events_; }
  // Number of samples where the per-sample cap stopped encoding early.
  std::int64_t cap_hits() const { return cap_hits_; }

 private:
  friend int adm_step(AdmState&, double, TimestampUs, std::uint8_t,
                      std::uint8_t, std::vector<SpikeEvent>&);
  double origin_;
  double delta_;
  int max_events_;
  std::int64_t steps_ = 0;
  std::int64_t cap_hits_ = 0;
};

// Encodes one filter output sample. Emitted events are appended to `out`;
// returns how many were emitted. Throws InvalidArgument for non-finite y.
int adm_step(AdmState& state, double y, TimestampUs t_us, std::uint8_t channel,
             std::uint8_t gain_index, std::vector<SpikeEvent>& out);

std::vector<SpikeEvent> adm_step(AdmState& state, double y, TimestampUs t_us,
                                 std::uint8_t channel, std::uint8_t gain_index);

// Staircase reconstruction of one channel's encoded level.
class Staircase {
 public:
  Staircase(double initial_level, std::vector<std::pair<TimestampUs, double>> steps)
      : initial_(initial_level), steps_(std::move(steps)) {}

  // Level after all events with timestamp <= t.
  double level_at(TimestampUs t) const;
  double initial_level() const { return initial_; }
  // (timestamp, level after every event at that timestamp), time ordered.
  const std::vector<std::pair<TimestampUs, double>>& steps() const { return steps_; }

 private:
  double initial_;
  std::vector<std::pair<TimestampUs, double>> steps_;
};

// Throws InvalidArgument if timestamps decrease.
Staircase reconstruct(std::span<const SpikeEvent> events, double delta,
                      double initial_level);

// ON events per signal period over [start_us, end_us), using the largest
// whole number of periods that fits. Needs at least two periods.
int count_on_per_rising_slope(std::span<const SpikeEvent> events,
                              double period_us, TimestampUs start_us,
                              TimestampUs end_us);

}  // namespace dascochlea

#endif  // DASCOCHLEA_ADM_ENCODER_H_
