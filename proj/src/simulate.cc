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
#include "dascochlea/simulate.h"

#include <cmath>
#include <string>

namespace dascochlea {

void SimulationConfig::validate() const {
  filterbank.validate();
  adm.validate();
  agc.validate();
}

TimestampUs sample_time_us(std::int64_t n, double sample_rate_hz) {
  return static_cast<TimestampUs>(std::floor(static_cast<double>(n) * 1e6 / sample_rate_hz));
}

SimulationResult simulate(std::span<const double> samples,
                          const SimulationConfig& cfg,
                          const SimulateOptions& opts) {
  cfg.validate();
  const ChannelRange active = cfg.filterbank.active_channels;
  if (opts.trace_channel && !active.contains(*opts.trace_channel)) {
    throw InvalidArgument("trace channel is not active");
  }

  std::vector<ChannelFilter<double>> filters;
  std::vector<AdmState> adm;
  filters.reserve(active.size());
  adm.reserve(active.size());
  for (int ch = active.first; ch <= active.last; ++ch) {
    filters.push_back(design_channel<double>(ch, cfg.filterbank));
    adm.emplace_back(cfg.adm);
  }

  SimulationResult result;
  result.agc_on = opts.agc_on;
  result.active_channels = active;
  result.events.reserve(samples.size());

  const ChannelRange controlled =
      opts.freeze_controller ? ChannelRange{0, -1} : active;
  std::optional<AgcController> controller;
  const int initial_gain = opts.agc_on ? cfg.agc.initial_gain_index : kMaxGainIndex;
  if (opts.agc_on) controller.emplace(cfg.agc, cfg.filterbank, controlled);
  for (int ch = active.first; ch <= active.last; ++ch) {
    filters[ch - active.first].set_gain_index(initial_gain);
    result.gain_trace.record({0, static_cast<std::uint8_t>(ch),
                              static_cast<std::uint8_t>(initial_gain)});
  }

  const double fs = cfg.filterbank.sample_rate_hz;
  const TimestampUs tick_us = cfg.agc.tick_us;
  TimestampUs next_tick = tick_us;
  AgcController::TickOutput tick_out;

  auto run_ticks_until = [&](double t_exact) {
    while (static_cast<double>(next_tick) <= t_exact) {
      tick_out.clear();
      controller->tick(next_tick, tick_out);
      for (const auto& w : tick_out.windows) {
        if (w.decision != GainDecision::kNone) {
          result.gain_trace.record({w.time_us, w.channel, w.gain_index});
        }
      }
      if (opts.record_windows) {
        result.windows.insert(result.windows.end(), tick_out.windows.begin(),
                              tick_out.windows.end());
      }
      for (const auto& u : tick_out.updates) {
        const int gi = controller->lookup().index_of(u.gain_pattern);
        filters[u.channel - active.first].schedule_gain(gi, u.apply_time_us,
                                                        u.dequeue_time_us);
        result.applications.push_back(
            {u.apply_time_us, u.channel, static_cast<std::uint8_t>(gi)});
      }
      next_tick += tick_us;
    }
  };

  if (opts.trace_channel) result.analog_trace.reserve(samples.size());
  const auto n_total = static_cast<std::int64_t>(samples.size());
  for (std::int64_t n = 0; n < n_total; ++n) {
    const double t_exact = static_cast<double>(n) * 1e6 / fs;
    const TimestampUs t_us = sample_time_us(n, fs);
    if (controller) run_ticks_until(t_exact);
    const double x = samples[n];
    if (!std::isfinite(x)) {
      throw InvalidArgument("non-finite audio sample at index " + std::to_string(n));
    }
    for (int ch = active.first; ch <= active.last; ++ch) {
      const int i = ch - active.first;
      const double y = filters[i].process_sample(x, t_us);
      if (opts.trace_channel && *opts.trace_channel == ch) {
        result.analog_trace.push_back(y);
      }
      const auto gi = static_cast<std::uint8_t>(
          controller ? controller->gain_index(ch) : kMaxGainIndex);
      const std::size_t first_new = result.events.size();
      if (adm_step(adm[i], y, t_us, static_cast<std::uint8_t>(ch), gi,
                   result.events) > 0 &&
          controller) {
        for (std::size_t k = first_new; k < result.events.size(); ++k) {
          controller->on_event(result.events[k]);
        }
      }
    }
  }
  result.duration_us = sample_time_us(n_total, fs);
  if (controller) {
    run_ticks_until(static_cast<double>(result.duration_us));
    result.dropped_requests = controller->queue().dropped();
  }
  for (const auto& s : adm) result.adm_cap_hits += s.cap_hits();
  return result;
}

}  // namespace dascochlea
