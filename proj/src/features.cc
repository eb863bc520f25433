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
#include "dascochlea/features.h"

#include <algorithm>
#include <array>
#include <cmath>

namespace dascochlea {

Eigen::VectorXd isi_histogram(std::span<const SpikeEvent> events, int n_bins,
                              double max_isi_ms) {
  if (n_bins < 1 || !(max_isi_ms > 0.0)) {
    throw InvalidArgument("histogram needs positive bins and range");
  }
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(n_bins);
  const double max_us = max_isi_ms * 1000.0;
  const double width_us = max_us / n_bins;
  std::array<TimestampUs, kNumChannels> last;
  last.fill(-1);
  for (const auto& ev : events) {
    auto& prev = last[ev.channel & 0x3F];
    if (prev >= 0) {
      const auto isi = static_cast<double>(ev.timestamp_us - prev);
      if (isi < 0.0) throw InvalidArgument("events are not time ordered");
      if (isi <= max_us) {
        const int bin = std::min(n_bins - 1, static_cast<int>(isi / width_us));
        hist[bin] += 1.0;
      }
    }
    prev = ev.timestamp_us;
  }
  return hist;
}

Eigen::VectorXd bin_spike_counts(std::span<const SpikeEvent> events,
                                 ChannelRange active, TimestampUs start_us,
                                 TimestampUs end_us) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(active.size());
  for (const auto& ev : events) {
    if (ev.timestamp_us < start_us || ev.timestamp_us >= end_us) continue;
    if (!active.contains(ev.channel)) continue;
    counts[ev.channel - active.first] += 1.0;
  }
  return counts;
}

Eigen::VectorXd average_channel_gain(const GainTrace* trace, bool agc,
                                     ChannelRange active, TimestampUs start_us,
                                     TimestampUs end_us) {
  if (!agc) return Eigen::VectorXd::Constant(active.size(), kNonAgcGainFeature);
  if (trace == nullptr) throw InvalidArgument("AGC features need a gain trace");
  Eigen::VectorXd gains(active.size());
  for (int ch = active.first; ch <= active.last; ++ch) {
    gains[ch - active.first] = trace->mean(ch, start_us, end_us);
  }
  return gains;
}

std::vector<FrameFeature> frame_stream(std::span<const SpikeEvent> events,
                                       const GainTrace* gain_trace,
                                       TimestampUs duration_us,
                                       const FrameOptions& opts) {
  if (opts.frame_len_us <= 0) throw InvalidArgument("frame length must be positive");
  if (opts.active_channels.size() != kActiveChannels) {
    throw InvalidArgument("frame features need exactly 36 active channels");
  }
  const TimestampUs n_frames = std::max<TimestampUs>(0, duration_us / opts.frame_len_us);
  std::vector<FrameFeature> frames;
  frames.reserve(static_cast<std::size_t>(n_frames));
  auto by_time = [](const SpikeEvent& ev, TimestampUs t) { return ev.timestamp_us < t; };
  auto begin = events.begin();
  for (TimestampUs k = 0; k < n_frames; ++k) {
    const TimestampUs start = k * opts.frame_len_us;
    const TimestampUs end = start + opts.frame_len_us;
    begin = std::lower_bound(begin, events.end(), start, by_time);
    const auto stop = std::lower_bound(begin, events.end(), end, by_time);
    const std::span<const SpikeEvent> slice(begin, stop);

    // ISIs only from channels that feed the count features.
    std::vector<SpikeEvent> active_events;
    active_events.reserve(slice.size());
    for (const auto& ev : slice) {
      if (opts.active_channels.contains(ev.channel)) active_events.push_back(ev);
    }

    FrameFeature f;
    f.frame_start_us = start;
    f.frame_len_us = opts.frame_len_us;
    f.values.head<kIsiBins>() = isi_histogram(active_events);
    f.values.segment<kActiveChannels>(kIsiBins) =
        bin_spike_counts(slice, opts.active_channels, start, end);
    f.values.tail<kActiveChannels>() = average_channel_gain(
        gain_trace, opts.agc, opts.active_channels, start, end);
    frames.push_back(f);
    begin = stop;
  }
  return frames;
}

FeatureNormalizer::FeatureNormalizer(Eigen::VectorXd mean, Eigen::VectorXd stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) {
    throw InvalidArgument("normalizer mean and stddev sizes differ");
  }
}

FeatureNormalizer FeatureNormalizer::fit(const Eigen::MatrixXd& train) {
  if (train.rows() < 2) {
    throw InvalidArgument("normalizer needs at least two training rows");
  }
  Eigen::VectorXd mean = train.colwise().mean().transpose();
  const Eigen::MatrixXd centered = train.rowwise() - mean.transpose();
  Eigen::VectorXd stddev =
      (centered.array().square().colwise().sum() / static_cast<double>(train.rows()))
          .sqrt()
          .transpose();
  return FeatureNormalizer(std::move(mean), std::move(stddev));
}

Eigen::MatrixXd FeatureNormalizer::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean_.size()) throw InvalidArgument("feature dimension mismatch");
  Eigen::MatrixXd out = x.rowwise() - mean_.transpose();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    // Rounding can leave a constant column with a ~1e-16 spread.
    if (stddev_[j] > 1e-12 * std::max(1.0, std::abs(mean_[j]))) {
      out.col(j) /= stddev_[j];
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

Eigen::MatrixXd stack_features(std::span<const FrameFeature> frames) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(frames.size()), kFeatureDim);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = frames[i].values.transpose();
  }
  return x;
}

}  // namespace dascochlea
