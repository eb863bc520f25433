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
#include "dascochlea/agc_controller.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace dascochlea {

void AgcParams::validate() const {
  if (n_periods < 1) throw InvalidArgument("n_periods must be positive");
  if (!(t_lower < t_upper)) throw InvalidArgument("require t_lower < t_upper");
  if (t_lower < 0) throw InvalidArgument("t_lower must be non-negative");
  if (t_upper > counter_max) throw InvalidArgument("t_upper exceeds counter_max");
  if (tick_us < 1) throw InvalidArgument("tick_us must be positive");
  if (window_max_ticks != (1 << 12) - 1) {
    throw InvalidArgument("window register is 12 bits wide");
  }
  if (counter_max != (1 << 6) - 1) {
    throw InvalidArgument("event counter is 6 bits wide");
  }
  if (gain_levels != kGainLevels) throw InvalidArgument("gain_levels must be 12");
  if (settle_time_us < 0) throw InvalidArgument("settle_time_us must be >= 0");
  if (queue_capacity < 1) throw InvalidArgument("queue_capacity must be positive");
  if (initial_gain_index < 0 || initial_gain_index > kMaxGainIndex) {
    throw InvalidArgument("initial_gain_index out of range");
  }
}

const char* to_string(GainDecision d) {
  switch (d) {
    case GainDecision::kIncrease:
      return "increase";
    case GainDecision::kDecrease:
      return "decrease";
    case GainDecision::kNone:
      break;
  }
  return "none";
}

int averaging_window_ticks(int ch, const AgcParams& params,
                           const FilterbankConfig& cfg) {
  const double fc = channel_center_freq(ch, cfg);
  const double ticks = params.n_periods * 1e6 / (fc * params.tick_us);
  return static_cast<int>(
      std::clamp(std::round(ticks), 1.0, double(params.window_max_ticks)));
}

void on_spike(AgcChannelRegs& regs, const SpikeEvent& ev, const AgcParams& params) {
  if (!regs.enabled) return;
  if (params.counted_polarity == CountedPolarity::kOnOnly &&
      ev.polarity != Polarity::kOn) {
    return;
  }
  if (regs.spike_count < params.counter_max) ++regs.spike_count;
}

std::optional<WindowClose> tick(AgcChannelRegs& regs, const AgcParams& params) {
  regs.window_end = false;
  if (!regs.enabled) return std::nullopt;
  ++regs.time_counter;
  if (regs.time_counter < regs.window_len_ticks) return std::nullopt;

  regs.window_end = true;
  WindowClose out;
  out.spike_count = regs.spike_count;
  if (regs.spike_count >= params.t_upper && regs.gain_index > 0) {
    --regs.gain_index;
    out.decision = GainDecision::kDecrease;
  }
  if (regs.spike_count < params.t_lower && regs.gain_index < kMaxGainIndex) {
    ++regs.gain_index;
    out.decision = GainDecision::kIncrease;
  }
  out.gain_index = regs.gain_index;
  regs.time_counter = 0;
  regs.spike_count = 0;
  return out;
}

GainLookupTable::GainLookupTable(std::span<const double> gain_db) {
  if (gain_db.size() != kGainLevels) {
    throw InvalidArgument("gain lookup table needs 12 levels");
  }
  for (int i = 0; i < kGainLevels; ++i) {
    entries_[i] = {static_cast<std::uint8_t>(i), gain_db[i]};
  }
}

GainLookupTable::GainLookupTable(std::span<const double> gain_db,
                                 std::span<const std::uint8_t> patterns)
    : GainLookupTable(gain_db) {
  if (patterns.size() != kGainLevels) {
    throw InvalidArgument("gain lookup table needs 12 patterns");
  }
  for (int i = 0; i < kGainLevels; ++i) {
    if (patterns[i] > 0x3F) throw InvalidArgument("gain pattern exceeds 6 bits");
    for (int j = 0; j < i; ++j) {
      if (patterns[j] == patterns[i]) {
        throw InvalidArgument("gain patterns must be distinct");
      }
    }
    entries_[i].pattern = patterns[i];
  }
}

GainLookupTable::Entry GainLookupTable::lookup(int gain_index) const {
  if (gain_index < 0 || gain_index > kMaxGainIndex) {
    throw InvalidArgument("gain index out of range: " + std::to_string(gain_index));
  }
  return entries_[gain_index];
}

int GainLookupTable::index_of(std::uint8_t pattern) const {
  for (int i = 0; i < kGainLevels; ++i) {
    if (entries_[i].pattern == pattern) return i;
  }
  throw InvalidArgument("unknown gain pattern " + std::to_string(pattern));
}

GainLookupTable::Entry gain_lookup(int gain_index) {
  static const GainLookupTable table(default_gain_table_db());
  return table.lookup(gain_index);
}

GainLookupTable::Entry gain_lookup(int gain_index, const GainLookupTable& table) {
  return table.lookup(gain_index);
}

GainUpdateQueue::GainUpdateQueue(std::size_t capacity) : slots_(capacity) {
  if (capacity == 0) throw InvalidArgument("queue capacity must be positive");
}

bool GainUpdateQueue::enqueue(const GainUpdateRequest& req) {
  if (size_ == slots_.size()) {
    ++dropped_;
    return false;
  }
  slots_[(head_ + size_) % slots_.size()] = req;
  ++size_;
  return true;
}

std::optional<GainUpdateRequest> GainUpdateQueue::dequeue() {
  if (size_ == 0) return std::nullopt;
  const GainUpdateRequest req = slots_[head_];
  head_ = (head_ + 1) % slots_.size();
  --size_;
  return req;
}

std::vector<ScheduledGainUpdate> service_gain_updates(GainUpdateQueue& queue,
                                                      TimestampUs now_us,
                                                      const AgcParams& params) {
  std::vector<ScheduledGainUpdate> out;
  if (queue.empty() || now_us < queue.busy_until_) return out;
  const auto req = *queue.dequeue();
  const TimestampUs apply = now_us + params.settle_time_us;
  queue.busy_until_ = apply;
  out.push_back({req.channel, req.gain_pattern, now_us, apply});
  return out;
}

double estimate_input_amplitude(double norm_rate, double gain_db) {
  if (norm_rate < 0.0) throw InvalidArgument("spike rate must be non-negative");
  return norm_rate * std::pow(10.0, -gain_db / 20.0);
}

double gain_adjusted_rate(double norm_rate, double gain_db, double gmax_db) {
  if (norm_rate < 0.0) throw InvalidArgument("spike rate must be non-negative");
  return norm_rate * std::pow(10.0, (gmax_db - gain_db) / 20.0);
}

AgcController::AgcController(const AgcParams& params, const FilterbankConfig& cfg,
                             ChannelRange enabled)
    : params_(params), lookup_(cfg.gain_table_db), queue_(params.queue_capacity) {
  params_.validate();
  for (int ch = 0; ch < kNumChannels; ++ch) {
    auto& r = regs_[ch];
    r.window_len_ticks =
        static_cast<std::uint16_t>(averaging_window_ticks(ch, params_, cfg));
    r.gain_index = static_cast<std::uint8_t>(params_.initial_gain_index);
    r.enabled = enabled.contains(ch);
  }
}

void AgcController::on_event(const SpikeEvent& ev) {
  check_channel(ev.channel);
  on_spike(regs_[ev.channel], ev, params_);
}

void AgcController::tick(TimestampUs now_us, TickOutput& out) {
  for (int ch = 0; ch < kNumChannels; ++ch) {
    auto& r = regs_[ch];
    if (!r.enabled) continue;
    const auto closed = dascochlea::tick(r, params_);
    if (!closed) continue;
    out.windows.push_back({now_us, static_cast<std::uint8_t>(ch),
                           closed->spike_count, closed->decision,
                           closed->gain_index});
    if (closed->decision != GainDecision::kNone) {
      queue_.enqueue({static_cast<std::uint8_t>(ch),
                      lookup_.lookup(closed->gain_index).pattern, now_us});
    }
  }
  for (const auto& u : service_gain_updates(queue_, now_us, params_)) {
    out.updates.push_back(u);
  }
}

}  // namespace dascochlea
