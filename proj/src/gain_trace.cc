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
#include "dascochlea/gain_trace.h"

#include <algorithm>
#include <string>

namespace dascochlea {

void GainTrace::record(const GainChange& change) {
  check_channel(change.channel);
  auto& s = steps_[change.channel];
  if (!s.empty() && change.time_us < s.back().first) {
    throw InvalidArgument("gain changes must be time ordered");
  }
  if (!s.empty() && s.back().first == change.time_us) {
    s.back().second = change.gain_index;
  } else {
    s.emplace_back(change.time_us, change.gain_index);
  }
}

int GainTrace::value_at(int ch, TimestampUs t) const {
  const auto& s = steps_.at(ch);
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](TimestampUs v, const auto& e) { return v < e.first; });
  if (it == s.begin()) {
    throw InvalidArgument("no gain recorded for channel " + std::to_string(ch) +
                          " at this time");
  }
  return std::prev(it)->second;
}

double GainTrace::mean(int ch, TimestampUs start_us, TimestampUs end_us) const {
  if (end_us <= start_us) throw InvalidArgument("empty averaging interval");
  const auto& s = steps_.at(ch);
  auto it = std::upper_bound(s.begin(), s.end(), start_us,
                             [](TimestampUs v, const auto& e) { return v < e.first; });
  if (it == s.begin()) {
    throw InvalidArgument("no gain recorded for channel " + std::to_string(ch) +
                          " at frame start");
  }
  double acc = 0.0;
  TimestampUs t = start_us;
  int value = std::prev(it)->second;
  for (; it != s.end() && it->first < end_us; ++it) {
    acc += static_cast<double>(value) * static_cast<double>(it->first - t);
    t = it->first;
    value = it->second;
  }
  acc += static_cast<double>(value) * static_cast<double>(end_us - t);
  return acc / static_cast<double>(end_us - start_us);
}

std::vector<GainChange> GainTrace::changes() const {
  std::vector<GainChange> out;
  for (int ch = 0; ch < kNumChannels; ++ch) {
    for (const auto& [t, g] : steps_[ch]) {
      out.push_back({t, static_cast<std::uint8_t>(ch), g});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.time_us < b.time_us;
  });
  return out;
}

}  // namespace dascochlea
