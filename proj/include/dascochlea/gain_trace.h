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
#ifndef DASCOCHLEA_GAIN_TRACE_H_
#define DASCOCHLEA_GAIN_TRACE_H_

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "dascochlea/common.h"

namespace dascochlea {

struct GainChange {
  TimestampUs time_us = 0;
  std::uint8_t channel = 0;
  std::uint8_t gain_index = 0;

  friend bool operator==(const GainChange&, const GainChange&) = default;
};

// Piecewise-constant gain index per channel. A channel holds its recorded
// value from the change time until the next change.
class GainTrace {
 public:
  // Changes for one channel must arrive in non-decreasing time order.
  void record(const GainChange& change);

  bool has_channel(int ch) const { return !steps_.at(ch).empty(); }
  // Throws InvalidArgument if the channel has no entry at or before t.
  int value_at(int ch, TimestampUs t) const;
  // Time-weighted mean gain index over [start, end).
  double mean(int ch, TimestampUs start_us, TimestampUs end_us) const;

  // All changes, ordered by time then channel.
  std::vector<GainChange> changes() const;
  const std::vector<std::pair<TimestampUs, std::uint8_t>>& steps(int ch) const {
    return steps_.at(ch);
  }

 private:
  std::array<std::vector<std::pair<TimestampUs, std::uint8_t>>, kNumChannels> steps_;
};

}  // namespace dascochlea

#endif  // DASCOCHLEA_GAIN_TRACE_H_
