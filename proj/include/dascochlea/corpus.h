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
#ifndef DASCOCHLEA_CORPUS_H_
#define DASCOCHLEA_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dascochlea/features.h"

namespace dascochlea {

enum class SourceKind {
  kSpeechLike,
  kBandNoise,
  kModulatedNoise,
  kTones,
  kChirps,
  kMusicLike,
  kFile,
};

const char* to_string(SourceKind kind);

struct CorpusSpec {
  double train_minutes = 10.0;
  double test_minutes = 10.0;
  double clip_min_s = 3.0;
  double clip_max_s = 6.0;
  double sample_rate_hz = 44100.0;

  void validate() const;
};

// A recording is described, not stored: synthetic clips are rendered on
// demand from their seed, file clips are read from `path`.
struct RecordingSpec {
  std::string id;
  Label label = Label::kSpeech;
  SourceKind kind = SourceKind::kSpeechLike;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path path;
};

struct Corpus {
  std::vector<RecordingSpec> train;
  std::vector<RecordingSpec> test;
};

// Pairs every speech-like clip with a noise clip of identical length, so
// each split is balanced by duration. Train and test draw from independent
// seed streams.
Corpus synth_corpus(const CorpusSpec& spec, std::uint64_t seed);

// Reads <root>/{train,test}/{speech,noise}/*.wav in sorted order.
Corpus scan_corpus_dir(const std::filesystem::path& root);

// Full-scale audio for one recording at sample_rate_hz.
std::vector<double> render(const RecordingSpec& rec, double sample_rate_hz = 44100.0);

// Voiced syllables on a 100-300 Hz pitch with formant-shaped harmonics,
// grouped into phrases separated by pauses.
std::vector<double> synth_speech_like(double seconds, double sample_rate_hz,
                                      std::uint64_t seed);
std::vector<double> synth_noise_like(SourceKind kind, double seconds,
                                     double sample_rate_hz, std::uint64_t seed);

// Clip pitch chosen by synth_speech_like for this seed.
double speech_base_pitch_hz(std::uint64_t seed);

}  // namespace dascochlea

#endif  // DASCOCHLEA_CORPUS_H_
