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
#ifndef DASCOCHLEA_FEATURES_H_
#define DASCOCHLEA_FEATURES_H_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dascochlea/common.h"
#include "dascochlea/filterbank.h"
#include "dascochlea/gain_trace.h"

namespace dascochlea {

inline constexpr int kIsiBins = 80;
inline constexpr int kActiveChannels = 36;
inline constexpr int kFeatureDim = kIsiBins + 2 * kActiveChannels;  // 152
inline constexpr double kMaxIsiMs = 150.0;
inline constexpr double kNonAgcGainFeature = kMaxGainIndex;

using FeatureVector = Eigen::Matrix<double, kFeatureDim, 1>;

enum class Label : int { kNoise = 0, kSpeech = 1 };

// One frame: [ISI histogram | per-channel counts | per-channel mean gain].
struct FrameFeature {
  FeatureVector values = FeatureVector::Zero();
  TimestampUs frame_start_us = 0;
  TimestampUs frame_len_us = 0;
  std::optional<Label> label;

  auto isi_hist() const { return values.head<kIsiBins>(); }
  auto channel_counts() const { return values.segment<kActiveChannels>(kIsiBins); }
  auto channel_gains() const { return values.tail<kActiveChannels>(); }
};

// Pooled histogram of per-channel inter-spike intervals. Bins are
// [k*w, (k+1)*w) with w = max_isi_ms / n_bins, the last bin closed at
// max_isi_ms; longer intervals are dropped. Events must be time ordered
// within each channel.
Eigen::VectorXd isi_histogram(std::span<const SpikeEvent> events,
                              int n_bins = kIsiBins, double max_isi_ms = kMaxIsiMs);

// Events per active channel in [start_us, end_us), ascending channel order.
// Events from inactive channels are ignored.
Eigen::VectorXd bin_spike_counts(std::span<const SpikeEvent> events,
                                 ChannelRange active, TimestampUs start_us,
                                 TimestampUs end_us);

// Time-weighted mean gain index per active channel over [start_us, end_us).
// Without AGC every entry is the constant 11.
Eigen::VectorXd average_channel_gain(const GainTrace* trace, bool agc,
                                     ChannelRange active, TimestampUs start_us,
                                     TimestampUs end_us);

struct FrameOptions {
  TimestampUs frame_len_us = 400'000;
  ChannelRange active_channels;
  bool agc = true;
};

// Non-overlapping frames tiling [0, duration_us); a trailing partial frame
// is discarded. `events` must be sorted by timestamp.
std::vector<FrameFeature> frame_stream(std::span<const SpikeEvent> events,
                                       const GainTrace* gain_trace,
                                       TimestampUs duration_us,
                                       const FrameOptions& opts);

// Per-dimension z-score fitted on training rows. Zero-variance dimensions
// map to 0.
class FeatureNormalizer {
 public:
  FeatureNormalizer() = default;
  FeatureNormalizer(Eigen::VectorXd mean, Eigen::VectorXd stddev);

  // Rows are samples. Needs at least two rows.
  static FeatureNormalizer fit(const Eigen::MatrixXd& train);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& stddev() const { return stddev_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd stddev_;
};

// Stacks frame features into a row-per-frame matrix.
Eigen::MatrixXd stack_features(std::span<const FrameFeature> frames);

}  // namespace dascochlea

#endif  // DASCOCHLEA_FEATURES_H_
