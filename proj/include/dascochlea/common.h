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
#ifndef DASCOCHLEA_COMMON_H_
#define DASCOCHLEA_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dascochlea {

inline constexpr int kNumChannels = 64;
inline constexpr int kGainLevels = 12;
inline constexpr int kMaxGainIndex = kGainLevels - 1;

// Microseconds since the start of a stream.
using TimestampUs = std::int64_t;

enum class Polarity : std::uint8_t { kOff = 0, kOn = 1 };

// One address event. Field widths follow the on-wire encoding: 6-bit
// channel address, 1-bit polarity, 4-bit gain index.
struct SpikeEvent {
  TimestampUs timestamp_us = 0;
  std::uint8_t channel = 0;
  Polarity polarity = Polarity::kOn;
  std::uint8_t gain_index = kMaxGainIndex;

  friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a filter cannot be realized at the configured sample rate.
class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check_channel(int ch) {
  if (ch < 0 || ch >= kNumChannels) {
    throw InvalidArgument("channel index out of range: " + std::to_string(ch));
  }
}

}  // namespace dascochlea

#endif  // DASCOCHLEA_COMMON_H_
