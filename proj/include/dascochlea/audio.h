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
#ifndef DASCOCHLEA_AUDIO_H_
#define DASCOCHLEA_AUDIO_H_

#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace dascochlea {

// Digital full scale 1.0 corresponds to this many millivolts RMS at the
// chip input.
inline constexpr double kFullScaleMilliVolts = 100.0;
inline constexpr double kSimulatorSampleRateHz = 44100.0;

class UnsupportedAudio : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AudioBuffer {
  double sample_rate_hz = kSimulatorSampleRateHz;
  std::vector<double> samples;
};

// Reads a PCM (8/16/24/32-bit integer) or IEEE float WAV file, averages
// channels to mono and scales to [-1, 1]. Throws UnsupportedAudio naming the
// encoding for anything else.
AudioBuffer read_wav(const std::filesystem::path& path);

// read_wav followed by resampling to 44.1 kHz.
std::vector<double> load_audio(const std::filesystem::path& path,
                               double target_rate_hz = kSimulatorSampleRateHz);

// Writes mono 16-bit PCM, clipping to [-1, 1].
void write_wav_pcm16(const std::filesystem::path& path,
                     std::span<const double> samples, double sample_rate_hz);

// Linear-interpolation resampler.
std::vector<double> resample_linear(std::span<const double> samples,
                                    double from_hz, double to_hz);

double rms(std::span<const double> samples);

// Scales samples so their RMS equals target_mV under the full-scale
// convention. Throws InvalidArgument for silent input.
std::vector<double> normalize_rms(std::span<const double> samples, double target_mV);

}  // namespace dascochlea

#endif  // DASCOCHLEA_AUDIO_H_
