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
#include "dascochlea/filterbank.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dascochlea {

std::vector<double> default_gain_table_db() {
  std::vector<double> table(kGainLevels);
  for (int i = 0; i < kGainLevels; ++i) {
    table[i] = 32.5 * i / kMaxGainIndex;
  }
  return table;
}

double FilterbankConfig::scale_factor() const {
  return std::pow(f_max_hz / f_min_hz, 1.0 / (num_channels - 1));
}

double FilterbankConfig::gain_linear(int gain_index) const {
  if (gain_index < 0 || gain_index > kMaxGainIndex) {
    throw InvalidArgument("gain index out of range: " +
                          std::to_string(gain_index));
  }
  return std::pow(10.0, gain_table_db[gain_index] / 20.0);
}

void FilterbankConfig::validate() const {
  if (!(sample_rate_hz > 0.0)) throw InvalidArgument("sample_rate_hz must be positive");
  if (num_channels != kNumChannels) throw InvalidArgument("num_channels must be 64");
  if (!(f_min_hz > 0.0) || !(f_min_hz < f_max_hz)) {
    throw InvalidArgument("require 0 < f_min_hz < f_max_hz");
  }
  if (!(q_factor > 0.0)) throw InvalidArgument("q_factor must be positive");
  if (active_channels.first < 0 || active_channels.last >= kNumChannels ||
      active_channels.first > active_channels.last) {
    throw InvalidArgument("invalid active channel range");
  }
  if (gain_table_db.size() != kGainLevels) {
    throw InvalidArgument("gain_table_db must have exactly 12 entries");
  }
  if (gain_table_db.front() != 0.0 || std::abs(gain_table_db.back() - 32.5) > 1e-9) {
    throw InvalidArgument("gain_table_db must span 0 dB to 32.5 dB");
  }
  for (int i = 1; i < kGainLevels; ++i) {
    const double step = gain_table_db[i] - gain_table_db[i - 1];
    if (step < 2.5 || step > 3.5) {
      throw InvalidArgument("gain_table_db steps must lie in [2.5, 3.5] dB");
    }
  }
  if (saturation.enabled && !(saturation.knee > 0.0)) {
    throw InvalidArgument("saturation knee must be positive");
  }
  for (int ch = active_channels.first; ch <= active_channels.last; ++ch) {
    if (!channel_is_realizable(ch, *this)) {
      throw InvalidArgument("active channel " + std::to_string(ch) +
                            " is above the usable band");
    }
  }
}

double channel_center_freq(int ch, const FilterbankConfig& cfg) {
  check_channel(ch);
  return cfg.f_min_hz * std::pow(cfg.scale_factor(), kNumChannels - 1 - ch);
}

bool channel_is_realizable(int ch, const FilterbankConfig& cfg) {
  return channel_center_freq(ch, cfg) < 0.45 * cfg.sample_rate_hz;
}

double cascade_q(int ch, const FilterbankConfig& cfg) {
  const auto filter = design_channel<double>(ch, cfg);
  const double fc = filter.center_freq_hz();
  const double peak = std::abs(filter.bandpass_response(fc));
  const double target = peak / std::sqrt(2.0);
  auto edge = [&](double lo, double hi) {
    // The magnitude is monotone on either side of the peak.
    const bool rising = std::abs(filter.bandpass_response(lo)) < target;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool below = std::abs(filter.bandpass_response(mid)) < target;
      if (below == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  const double f_lo = edge(fc * 1e-3, fc);
  const double f_hi = edge(fc, 0.5 * cfg.sample_rate_hz * 0.999999);
  return fc / (f_hi - f_lo);
}

double noise_adjusted_amplitude(double v_out, double v_noise) {
  if (v_out < 0.0 || v_noise < 0.0) {
    throw InvalidArgument("RMS amplitudes must be non-negative");
  }
  return std::sqrt(std::max(v_out * v_out - v_noise * v_noise, 0.0));
}

double GainDb::db() const {
  if (below_floor_) throw std::logic_error("gain is below the noise floor");
  return db_;
}

std::string GainDb::to_string() const {
  if (below_floor_) return "below_floor";
  std::ostringstream os;
  os.precision(10);
  os << db_;
  return os.str();
}

GainDb channel_gain_db(double v_na, double v_in) {
  if (!(v_in > 0.0)) throw InvalidArgument("input RMS must be positive");
  if (v_na < 0.0) throw InvalidArgument("output RMS must be non-negative");
  if (v_na == 0.0) return GainDb::below_floor();
  return GainDb(20.0 * std::log10(v_na / v_in));
}

GainGrid frequency_response(int ch, int gain_index,
                            std::span<const double> amplitudes,
                            std::span<const double> freqs_hz,
                            const FilterbankConfig& cfg,
                            const FrequencyResponseOptions& opts) {
  if (amplitudes.empty() || freqs_hz.empty()) {
    throw InvalidArgument("frequency_response needs non-empty grids");
  }
  const double nyquist = 0.5 * cfg.sample_rate_hz;
  for (double f : freqs_hz) {
    if (!(f > 0.0) || f >= nyquist) {
      throw InvalidArgument("probe frequency must lie in (0, Nyquist)");
    }
  }
  GainGrid grid{{amplitudes.begin(), amplitudes.end()},
                {freqs_hz.begin(), freqs_hz.end()},
                {}};
  grid.values.reserve(amplitudes.size() * freqs_hz.size());
  const auto prototype = design_channel<double>(ch, cfg);
  const double fc = prototype.center_freq_hz();
  for (double amp : amplitudes) {
    for (double f : freqs_hz) {
      auto filter = prototype;
      filter.set_gain_index(gain_index);
      // Settle on the slower of the probe and the channel's own ringing.
      const double slow_hz = std::min(f, fc);
      const auto settle = static_cast<long>(
          std::ceil(opts.settle_periods * cfg.sample_rate_hz / slow_hz));
      const double periods = std::max(1.0, std::round(opts.measure_periods));
      const auto measure =
          static_cast<long>(std::round(periods * cfg.sample_rate_hz / f));
      const double w = 2.0 * std::numbers::pi * f / cfg.sample_rate_hz;
      const double peak = amp * std::numbers::sqrt2;
      double in_sq = 0.0;
      double out_sq = 0.0;
      for (long n = 0; n < settle + measure; ++n) {
        const double x = peak * std::sin(w * static_cast<double>(n));
        const double y = filter.process_sample(x);
        if (n >= settle) {
          in_sq += x * x;
          out_sq += y * y;
        }
      }
      const double v_in = std::sqrt(in_sq / measure);
      const double v_out = std::sqrt(out_sq / measure);
      grid.values.push_back(
          channel_gain_db(noise_adjusted_amplitude(v_out, opts.v_noise), v_in));
    }
  }
  return grid;
}

}  // namespace dascochlea
