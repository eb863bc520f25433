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
#include "dascochlea/event_file.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace dascochlea {
namespace {

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::is_unsigned_v<T>);
  char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b, sizeof(T));
}

void put_f64(std::ostream& os, double v) { put(os, std::bit_cast<std::uint64_t>(v)); }

template <typename T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw FormatError("truncated event file");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(T(b[i]) << (8 * i));
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get<std::uint64_t>(is)); }

}  // namespace

void write_events(std::ostream& os, const EventFileHeader& h,
                  const std::vector<SpikeEvent>& events) {
  if (h.num_channels < 1 || h.num_channels > 255) throw InvalidArgument("bad channel count");
  if (h.gain_table_db.size() > 255) throw InvalidArgument("gain table too long");
  if (h.source_id.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw InvalidArgument("source id too long");
  }
  os.write(kEventFileMagic, 4);
  put<std::uint32_t>(os, h.version);
  put_f64(os, h.sample_rate_hz);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(h.num_channels));
  put<std::uint8_t>(os, h.agc ? 1 : 0);
  put<std::uint8_t>(os, h.label ? static_cast<std::uint8_t>(*h.label) : 255);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(h.gain_table_db.size()));
  put_f64(os, h.delta);
  for (double g : h.gain_table_db) put_f64(os, g);
  put_f64(os, h.amplitude_mV.value_or(std::numeric_limits<double>::quiet_NaN()));
  put<std::uint16_t>(os, static_cast<std::uint16_t>(h.source_id.size()));
  os.write(h.source_id.data(), static_cast<std::streamsize>(h.source_id.size()));
  put<std::uint64_t>(os, events.size());
  for (const SpikeEvent& ev : events) {
    if (ev.timestamp_us < 0) throw InvalidArgument("negative timestamp");
    put<std::uint64_t>(os, static_cast<std::uint64_t>(ev.timestamp_us));
    put<std::uint8_t>(os, ev.channel);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(ev.polarity));
    put<std::uint8_t>(os, ev.gain_index);
    put<std::uint8_t>(os, 0);
  }
  if (!os) throw std::runtime_error("event stream write failed");
}

void read_events(std::istream& is, EventFileHeader& h, std::vector<SpikeEvent>& events) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kEventFileMagic, 4) != 0) {
    throw FormatError("not an event file (bad magic)");
  }
  h.version = get<std::uint32_t>(is);
  if (h.version != kEventFileVersion) {
    throw FormatError("unsupported event file version " + std::to_string(h.version));
  }
  h.sample_rate_hz = get_f64(is);
  h.num_channels = get<std::uint8_t>(is);
  h.agc = get<std::uint8_t>(is) != 0;
  const auto label = get<std::uint8_t>(is);
  if (label > 1 && label != 255) throw FormatError("bad label byte");
  h.label = label == 255 ? std::nullopt : std::optional<Label>(static_cast<Label>(label));
  const auto levels = get<std::uint8_t>(is);
  h.delta = get_f64(is);
  h.gain_table_db.resize(levels);
  for (double& g : h.gain_table_db) g = get_f64(is);
  const double amp = get_f64(is);
  h.amplitude_mV = std::isnan(amp) ? std::nullopt : std::optional<double>(amp);
  h.source_id.resize(get<std::uint16_t>(is));
  if (!is.read(h.source_id.data(), static_cast<std::streamsize>(h.source_id.size()))) {
    throw FormatError("truncated event file");
  }
  const auto count = get<std::uint64_t>(is);
  events.clear();
  events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  for (std::uint64_t i = 0; i < count; ++i) {
    SpikeEvent ev;
    ev.timestamp_us = static_cast<TimestampUs>(get<std::uint64_t>(is));
    ev.channel = get<std::uint8_t>(is);
    const auto pol = get<std::uint8_t>(is);
    ev.gain_index = get<std::uint8_t>(is);
    get<std::uint8_t>(is);
    if (ev.channel >= h.num_channels || pol > 1 || ev.gain_index >= std::max<std::size_t>(levels, 1)) {
      throw FormatError("event record out of range at index " + std::to_string(i));
    }
    ev.polarity = static_cast<Polarity>(pol);
    events.push_back(ev);
  }
}

void write_event_file(const std::filesystem::path& path, const EventFileHeader& header,
                      const std::vector<SpikeEvent>& events) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_events(os, header, events);
}

void read_event_file(const std::filesystem::path& path, EventFileHeader& header,
                     std::vector<SpikeEvent>& events) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  read_events(is, header, events);
}

}  // namespace dascochlea
