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
#ifndef DASCOCHLEA_EVENT_FILE_H_
#define DASCOCHLEA_EVENT_FILE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dascochlea/common.h"
#include "dascochlea/features.h"

namespace dascochlea {

// Binary event stream, all fields little-endian:
//
//   char[4]  magic "DASE"
//   u32      version
//   f64      sample_rate_hz
//   u8       num_channels
//   u8       agc_flag
//   u8       label (0 noise, 1 speech, 255 unknown)
//   u8       gain_levels (n)
//   f64      delta
//   f64[n]   gain_table_db
//   f64      amplitude_mV (NaN when unknown)
//   u16      source id length, then that many bytes
//   u64      event count
//   records  u64 timestamp_us, u8 channel, u8 polarity, u8 gain_index, u8 pad
inline constexpr char kEventFileMagic[4] = {'D', 'A', 'S', 'E'};
inline constexpr std::uint32_t kEventFileVersion = 1;
inline constexpr std::size_t kEventRecordBytes = 12;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EventFileHeader {
  std::uint32_t version = kEventFileVersion;
  double sample_rate_hz = 44100.0;
  int num_channels = kNumChannels;
  bool agc = true;
  double delta = 1.0;
  std::vector<double> gain_table_db;
  std::optional<double> amplitude_mV;
  std::optional<Label> label;
  std::string source_id;

  bool operator==(const EventFileHeader&) const = default;
};

void write_events(std::ostream& os, const EventFileHeader& header,
                  const std::vector<SpikeEvent>& events);
void read_events(std::istream& is, EventFileHeader& header, std::vector<SpikeEvent>& events);

void write_event_file(const std::filesystem::path& path, const EventFileHeader& header,
                      const std::vector<SpikeEvent>& events);
void read_event_file(const std::filesystem::path& path, EventFileHeader& header,
                     std::vector<SpikeEvent>& events);

}  // namespace dascochlea

#endif  // DASCOCHLEA_EVENT_FILE_H_
