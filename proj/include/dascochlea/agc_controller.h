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
#ifndef DASCOCHLEA_AGC_CONTROLLER_H_
#define DASCOCHLEA_AGC_CONTROLLER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dascochlea/common.h"
#include "dascochlea/filterbank.h"

namespace dascochlea {

// Which event polarities advance the per-window spike counter.
enum class CountedPolarity : std::uint8_t { kOnOnly, kBoth };

struct AgcParams {
  int n_periods = 8;
  int t_lower = 1;
  int t_upper = 16;
  int tick_us = 100;
  // Register limits: 12-bit window length, 6-bit event counter.
  int window_max_ticks = (1 << 12) - 1;
  int counter_max = (1 << 6) - 1;
  int gain_levels = kGainLevels;
  int settle_time_us = 500;
  std::size_t queue_capacity = 128;
  CountedPolarity counted_polarity = CountedPolarity::kOnOnly;
  int initial_gain_index = kMaxGainIndex;

  void validate() const;
};

// Per-channel controller state, sized like the hardware registers.
struct AgcChannelRegs {
  std::uint16_t window_len_ticks = 1;  // 12 bits
  std::uint16_t time_counter = 0;      // 12 bits
  std::uint8_t spike_count = 0;        // 6 bits, saturating
  std::uint8_t gain_index = kMaxGainIndex;  // 4 bits, 0..11
  bool enabled = false;
  bool window_end = false;

  friend bool operator==(const AgcChannelRegs&, const AgcChannelRegs&) = default;
};

enum class GainDecision : std::uint8_t { kNone = 0, kIncrease = 1, kDecrease = 2 };

const char* to_string(GainDecision d);

// Outcome of a completed averaging window.
struct WindowClose {
  std::uint8_t spike_count = 0;  // count at the end of the window
  GainDecision decision = GainDecision::kNone;
  std::uint8_t gain_index = 0;   // register value after the decision
};

// N periods of the channel's center frequency in 100 us ticks, clamped to
// what the 12-bit register can hold.
int averaging_window_ticks(int ch, const AgcParams& params,
                           const FilterbankConfig& cfg);

// Counts one event into the channel's window. No-op when the channel is
// disabled or the polarity is not counted; saturates at counter_max.
void on_spike(AgcChannelRegs& regs, const SpikeEvent& ev, const AgcParams& params);

// One 100 us tick. Returns the window outcome when the window completes.
std::optional<WindowClose> tick(AgcChannelRegs& regs, const AgcParams& params);

// Shared table translating a 4-bit gain index into a 6-bit chip setting.
class GainLookupTable {
 public:
  struct Entry {
    std::uint8_t pattern = 0;
    double db = 0.0;
  };

  // Patterns default to the gain index itself.
  explicit GainLookupTable(std::span<const double> gain_db);
  GainLookupTable(std::span<const double> gain_db,
                  std::span<const std::uint8_t> patterns);

  // Throws InvalidArgument for an index above 11.
  Entry lookup(int gain_index) const;
  // Inverse lookup; throws InvalidArgument for an unknown pattern.
  int index_of(std::uint8_t pattern) const;
  double max_db() const { return entries_.back().db; }

 private:
  std::array<Entry, kGainLevels> entries_{};
};

GainLookupTable::Entry gain_lookup(int gain_index);
GainLookupTable::Entry gain_lookup(int gain_index, const GainLookupTable& table);

struct GainUpdateRequest {
  std::uint8_t channel = 0;       // 6 bits
  std::uint8_t gain_pattern = 0;  // 6 bits
  TimestampUs enqueue_time_us = 0;

  friend bool operator==(const GainUpdateRequest&, const GainUpdateRequest&) = default;
};

struct ScheduledGainUpdate {
  std::uint8_t channel = 0;
  std::uint8_t gain_pattern = 0;
  TimestampUs dequeue_time_us = 0;
  TimestampUs apply_time_us = 0;
};

// Bounded FIFO of gain update requests. Requests arriving while full are
// dropped and counted.
class GainUpdateQueue {
 public:
  explicit GainUpdateQueue(std::size_t capacity = 128);

  // Returns false when the request was dropped.
  bool enqueue(const GainUpdateRequest& req);
  std::optional<GainUpdateRequest> dequeue();

  std::size_t depth() const { return size_; }
  std::size_t capacity() const { return slots_.size(); }
  bool empty() const { return size_ == 0; }
  std::uint64_t dropped() const { return dropped_; }
  // Time before which the chip is still loading the previous setting.
  TimestampUs busy_until() const { return busy_until_; }

 private:
  friend std::vector<ScheduledGainUpdate> service_gain_updates(
      GainUpdateQueue&, TimestampUs, const AgcParams&);
  std::vector<GainUpdateRequest> slots_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::uint64_t dropped_ = 0;
  TimestampUs busy_until_ = 0;
};

// Starts at most one chip update when the previous one has settled. The
// dequeued request becomes active settle_time_us after it is dequeued.
std::vector<ScheduledGainUpdate> service_gain_updates(GainUpdateQueue& queue,
                                                      TimestampUs now_us,
                                                      const AgcParams& params);

// s * 10^(-G/20): input amplitude up to a constant factor.
double estimate_input_amplitude(double norm_rate, double gain_db);

// s * 10^((G_max - G)/20): rate referred to the maximum gain setting.
double gain_adjusted_rate(double norm_rate, double gain_db, double gmax_db);

// Per-window trace record.
struct WindowRecord {
  TimestampUs time_us = 0;
  std::uint8_t channel = 0;
  std::uint8_t spike_count = 0;
  GainDecision decision = GainDecision::kNone;
  std::uint8_t gain_index = 0;
};

// All 64 channel controllers plus the shared update queue, advanced by
// events and a global tick in ascending channel order.
class AgcController {
 public:
  AgcController(const AgcParams& params, const FilterbankConfig& cfg,
                ChannelRange enabled);

  void on_event(const SpikeEvent& ev);

  struct TickOutput {
    std::vector<WindowRecord> windows;
    std::vector<ScheduledGainUpdate> updates;

    void clear() {
      windows.clear();
      updates.clear();
    }
  };
  // Appends closed windows and started chip updates to `out`.
  void tick(TimestampUs now_us, TickOutput& out);

  const AgcChannelRegs& regs(int ch) const { return regs_.at(ch); }
  AgcChannelRegs& regs(int ch) { return regs_.at(ch); }
  int gain_index(int ch) const { return regs_[ch].gain_index; }
  const GainUpdateQueue& queue() const { return queue_; }
  const GainLookupTable& lookup() const { return lookup_; }
  const AgcParams& params() const { return params_; }

 private:
  AgcParams params_;
  GainLookupTable lookup_;
  std::array<AgcChannelRegs, kNumChannels> regs_{};
  GainUpdateQueue queue_;
};

}  // namespace dascochlea

#endif  // DASCOCHLEA_AGC_CONTROLLER_H_
