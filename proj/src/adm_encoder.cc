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
#include "dascochlea/adm_encoder.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace dascochlea {

void AdmParams::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("ADM delta must be positive");
  }
  if (max_events_per_sample < 1) {
    throw InvalidArgument("max_events_per_sample must be at least 1");
  }
  if (!std::isfinite(reference_offset)) {
    throw InvalidArgument("reference_offset must be finite");
  }
}

AdmState::AdmState(const AdmParams& params)
    : AdmState(params.delta, params.reference_offset * params.delta,
               params.max_events_per_sample) {}

AdmState::AdmState(double delta, double initial_level, int max_events_per_sample)
    : origin_(initial_level), delta_(delta), max_events_(max_events_per_sample) {
  if (!(delta > 0.0)) throw InvalidArgument("ADM delta must be positive");
  if (max_events_per_sample < 1) {
    throw InvalidArgument("max_events_per_sample must be at least 1");
  }
}

int adm_step(AdmState& state, double y, TimestampUs t_us, std::uint8_t channel,
             std::uint8_t gain_index, std::vector<SpikeEvent>& out) {
  if (!std::isfinite(y)) {
    throw InvalidArgument("non-finite ADM input on channel " +
                          std::to_string(channel));
  }
  int emitted = 0;
  while (emitted < state.max_events_ && y - state.level() >= state.delta_) {
    ++state.steps_;
    out.push_back({t_us, channel, Polarity::kOn, gain_index});
    ++emitted;
  }
  while (emitted < state.max_events_ && state.level() - y >= state.delta_) {
    --state.steps_;
    out.push_back({t_us, channel, Polarity::kOff, gain_index});
    ++emitted;
  }
  if (emitted == state.max_events_ &&
      std::abs(y - state.level()) >= state.delta_) {
    ++state.cap_hits_;
  }
  return emitted;
}

std::vector<SpikeEvent> adm_step(AdmState& state, double y, TimestampUs t_us,
                                 std::uint8_t channel, std::uint8_t gain_index) {
  std::vector<SpikeEvent> out;
  adm_step(state, y, t_us, channel, gain_index, out);
  return out;
}

double Staircase::level_at(TimestampUs t) const {
  auto it = std::upper_bound(
      steps_.begin(), steps_.end(), t,
      [](TimestampUs value, const auto& step) { return value < step.first; });
  if (it == steps_.begin()) return initial_;
  return std::prev(it)->second;
}

Staircase reconstruct(std::span<const SpikeEvent> events, double delta,
                      double initial_level) {
  std::vector<std::pair<TimestampUs, double>> steps;
  std::int64_t net = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (i > 0 && ev.timestamp_us < events[i - 1].timestamp_us) {
      throw InvalidArgument("events are not time ordered");
    }
    net += ev.polarity == Polarity::kOn ? 1 : -1;
    const double level = initial_level + static_cast<double>(net) * delta;
    if (!steps.empty() && steps.back().first == ev.timestamp_us) {
      steps.back().second = level;
    } else {
      steps.emplace_back(ev.timestamp_us, level);
    }
  }
  return Staircase(initial_level, std::move(steps));
}

int count_on_per_rising_slope(std::span<const SpikeEvent> events,
                              double period_us, TimestampUs start_us,
                              TimestampUs end_us) {
  if (!(period_us > 0.0)) throw InvalidArgument("period must be positive");
  const double span = static_cast<double>(end_us - start_us);
  const auto periods = static_cast<std::int64_t>(std::floor(span / period_us));
  if (periods < 2) {
    throw InsufficientData("need at least two signal periods of events");
  }
  const double stop = static_cast<double>(start_us) + periods * period_us;
  std::int64_t on = 0;
  for (const auto& ev : events) {
    const auto t = static_cast<double>(ev.timestamp_us);
    if (ev.polarity == Polarity::kOn && ev.timestamp_us >= start_us && t < stop) {
      ++on;
    }
  }
  return static_cast<int>(std::lround(static_cast<double>(on) / periods));
}

}  // namespace dascochlea
