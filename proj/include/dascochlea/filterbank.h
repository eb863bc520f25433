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
#ifndef DASCOCHLEA_FILTERBANK_H_
#define DASCOCHLEA_FILTERBANK_H_

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dascochlea/common.h"

namespace dascochlea {

// Inclusive interval of channel indices. Channel 0 is the highest center
// frequency, channel 63 the lowest.
struct ChannelRange {
  int first = 12;
  int last = 47;

  int size() const { return last - first + 1; }
  bool contains(int ch) const { return ch >= first && ch <= last; }
  friend bool operator==(const ChannelRange&, const ChannelRange&) = default;
};

struct SaturationConfig {
  bool enabled = false;
  // Output level (after the gain multiplier) where the tanh limiter bends.
  double knee = 2.0;
};

// Twelve equal steps from 0 dB to 32.5 dB.
std::vector<double> default_gain_table_db();

struct FilterbankConfig {
  double sample_rate_hz = 44100.0;
  int num_channels = kNumChannels;
  double f_min_hz = 8.0;
  double f_max_hz = 20000.0;
  double q_factor = 4.0;
  ChannelRange active_channels;
  std::vector<double> gain_table_db = default_gain_table_db();
  SaturationConfig saturation;

  // Geometric spacing between adjacent channels, (f_max / f_min)^(1/63).
  double scale_factor() const;
  double gain_linear(int gain_index) const;
  // Throws InvalidArgument when any invariant is violated.
  void validate() const;
};

// Center frequency of a channel: f_min * sf^(63 - ch).
double channel_center_freq(int ch, const FilterbankConfig& cfg);

// True when the channel's center frequency is low enough to be realized
// digitally (below 0.45 * sample rate).
bool channel_is_realizable(int ch, const FilterbankConfig& cfg);

// Transposed direct form II second-order section.
template <typename Scalar>
class Biquad {
 public:
  Biquad() = default;
  Biquad(Scalar b0, Scalar b1, Scalar b2, Scalar a1, Scalar a2)
      : b0_(b0), b1_(b1), b2_(b2), a1_(a1), a2_(a2) {}

  // Constant 0 dB peak-gain bandpass at center_hz, bilinear transform.
  static Biquad bandpass(double center_hz, double q, double sample_rate_hz) {
    const double w0 = 2.0 * std::numbers::pi * center_hz / sample_rate_hz;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    return Biquad(static_cast<Scalar>(alpha / a0), Scalar(0),
                  static_cast<Scalar>(-alpha / a0),
                  static_cast<Scalar>(-2.0 * std::cos(w0) / a0),
                  static_cast<Scalar>((1.0 - alpha) / a0));
  }

  Scalar process(Scalar x) {
    const Scalar y = b0_ * x + z1_;
    z1_ = b1_ * x - a1_ * y + z2_;
    z2_ = b2_ * x - a2_ * y;
    return y;
  }

  void reset() { z1_ = z2_ = Scalar(0); }

  // H(e^{jw}) at normalized angular frequency w (radians per sample).
  std::complex<double> response(double w) const {
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    return (double(b0_) + double(b1_) * z1 + double(b2_) * z2) /
           (1.0 + double(a1_) * z1 + double(a2_) * z2);
  }

  Scalar state1() const { return z1_; }
  Scalar state2() const { return z2_; }

 private:
  Scalar b0_ = 0, b1_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
  Scalar z1_ = 0, z2_ = 0;
};

struct PendingGain {
  int gain_index = kMaxGainIndex;
  TimestampUs activation_us = 0;
};

// One cochlea channel: programmable gain, optional soft limiter, and a
// fourth-order bandpass made of two identical second-order sections.
template <typename Scalar>
class ChannelFilter {
 public:
  static constexpr int kSections = 2;

  ChannelFilter(int channel, double center_hz, double sample_rate_hz,
                std::array<Biquad<Scalar>, kSections> sections,
                std::span<const double> gain_table_db,
                SaturationConfig saturation)
      : channel_(channel),
        center_hz_(center_hz),
        sample_rate_hz_(sample_rate_hz),
        sections_(sections),
        saturation_(saturation) {
    if (gain_table_db.size() != kGainLevels) {
      throw InvalidArgument("gain table must have 12 entries");
    }
    for (int i = 0; i < kGainLevels; ++i) {
      gain_linear_[i] = static_cast<Scalar>(std::pow(10.0, gain_table_db[i] / 20.0));
    }
    set_gain_index(kMaxGainIndex);
  }

  // Advances one sample. A pending gain whose activation time has been
  // reached is applied before the sample is filtered.
  Scalar process_sample(Scalar x, TimestampUs now_us = 0) {
    if (!std::isfinite(x)) {
      throw InvalidArgument("non-finite filter input on channel " +
                            std::to_string(channel_));
    }
    if (pending_ && now_us >= pending_->activation_us) {
      set_gain_index(pending_->gain_index);
    }
    Scalar u = applied_gain_ * x;
    if (saturation_.enabled) {
      const Scalar knee = static_cast<Scalar>(saturation_.knee);
      u = knee * std::tanh(u / knee);
    }
    for (auto& s : sections_) u = s.process(u);
    return u;
  }

  // Immediate gain change; clears any pending request.
  void set_gain_index(int gain_index) {
    check_gain_index(gain_index);
    gain_index_ = gain_index;
    applied_gain_ = gain_linear_[gain_index];
    pending_.reset();
  }

  // Requests a gain change that takes effect at activation_us. A pending
  // request that has already come due by `now_us` is committed first.
  void schedule_gain(int gain_index, TimestampUs activation_us,
                     TimestampUs now_us) {
    check_gain_index(gain_index);
    if (pending_ && pending_->activation_us <= now_us) {
      set_gain_index(pending_->gain_index);
    }
    pending_ = PendingGain{gain_index, activation_us};
  }

  void reset() {
    for (auto& s : sections_) s.reset();
  }

  // Small-signal transfer function of the bandpass cascade (no gain).
  std::complex<double> bandpass_response(double freq_hz) const {
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz_;
    std::complex<double> h = 1.0;
    for (const auto& s : sections_) h *= s.response(w);
    return h;
  }

  int channel() const { return channel_; }
  double center_freq_hz() const { return center_hz_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  int applied_gain_index() const { return gain_index_; }
  Scalar applied_gain_linear() const { return applied_gain_; }
  const std::optional<PendingGain>& pending_gain() const { return pending_; }
  const std::array<Biquad<Scalar>, kSections>& sections() const {
    return sections_;
  }

 private:
  static void check_gain_index(int gi) {
    if (gi < 0 || gi > kMaxGainIndex) {
      throw InvalidArgument("gain index out of range: " + std::to_string(gi));
    }
  }

  int channel_;
  double center_hz_;
  double sample_rate_hz_;
  std::array<Biquad<Scalar>, kSections> sections_;
  SaturationConfig saturation_;
  std::array<Scalar, kGainLevels> gain_linear_{};
  int gain_index_ = kMaxGainIndex;
  Scalar applied_gain_ = 1;
  std::optional<PendingGain> pending_;
};

// Designs channel `ch`. Throws DesignError when the center frequency is not
// realizable at the configured sample rate.
template <typename Scalar = double>
ChannelFilter<Scalar> design_channel(int ch, const FilterbankConfig& cfg) {
  const double fc = channel_center_freq(ch, cfg);
  if (!channel_is_realizable(ch, cfg)) {
    throw DesignError("channel " + std::to_string(ch) + " center frequency " +
                      std::to_string(fc) + " Hz is above the usable band at " +
                      std::to_string(cfg.sample_rate_hz) + " Hz");
  }
  const auto section =
      Biquad<Scalar>::bandpass(fc, cfg.q_factor, cfg.sample_rate_hz);
  return ChannelFilter<Scalar>(ch, fc, cfg.sample_rate_hz, {section, section},
                               cfg.gain_table_db, cfg.saturation);
}

// Overall Q of the designed cascade, measured from its -3 dB points.
double cascade_q(int ch, const FilterbankConfig& cfg);

// sqrt(max(v_out^2 - v_noise^2, 0)).
double noise_adjusted_amplitude(double v_out, double v_noise);

// Gain in dB with an explicit marker for a zero noise-adjusted output.
class GainDb {
 public:
  explicit GainDb(double db) : db_(db) {}
  static GainDb below_floor() { return GainDb(); }

  bool is_below_floor() const { return below_floor_; }
  // Throws std::logic_error for a below-floor value.
  double db() const;
  double value_or(double floor_db) const { return below_floor_ ? floor_db : db_; }
  std::string to_string() const;

 private:
  GainDb() : below_floor_(true) {}
  double db_ = 0.0;
  bool below_floor_ = false;
};

// 20 log10(v_na / v_in).
GainDb channel_gain_db(double v_na, double v_in);

struct FrequencyResponseOptions {
  // Measured output noise floor subtracted before computing the gain.
  double v_noise = 0.0;
  int settle_periods = 50;
  int measure_periods = 40;
};

// Rows follow `amplitudes` (input RMS, full-scale units), columns `freqs`.
struct GainGrid {
  std::vector<double> amplitudes;
  std::vector<double> freqs_hz;
  std::vector<GainDb> values;

  const GainDb& at(std::size_t amp_row, std::size_t freq_col) const {
    return values[amp_row * freqs_hz.size() + freq_col];
  }
};

// Steady-state sine gain of one channel over an amplitude x frequency grid.
GainGrid frequency_response(int ch, int gain_index,
                            std::span<const double> amplitudes,
                            std::span<const double> freqs_hz,
                            const FilterbankConfig& cfg,
                            const FrequencyResponseOptions& opts = {});

}  // namespace dascochlea

#endif  // DASCOCHLEA_FILTERBANK_H_
