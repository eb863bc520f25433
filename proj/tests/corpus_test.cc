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
#include "dascochlea/corpus.h"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "dascochlea/audio.h"

namespace dascochlea {
namespace {

// Hann-windowed DFT magnitude at an arbitrary frequency.
double dft_mag(const std::vector<double>& x, std::size_t start, std::size_t n, double f,
               double fs) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
    acc += w * x[start + i] * std::polar(1.0, -2.0 * std::numbers::pi * f * i / fs);
  }
  return std::abs(acc);
}

CorpusSpec small_spec() {
  CorpusSpec spec;
  spec.train_minutes = 1.0;
  spec.test_minutes = 0.5;
  return spec;
}

TEST(SynthCorpus, Deterministic) {
  const auto a = synth_corpus(small_spec(), 7);
  const auto b = synth_corpus(small_spec(), 7);
  ASSERT_EQ(a.train.size(), b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].id, b.train[i].id);
    EXPECT_EQ(a.train[i].seed, b.train[i].seed);
    EXPECT_EQ(a.train[i].duration_s, b.train[i].duration_s);
  }
  EXPECT_EQ(render(a.train[0]), render(b.train[0]));
  EXPECT_EQ(render(a.train[1]), render(b.train[1]));
  EXPECT_NE(synth_corpus(small_spec(), 8).train[0].seed, a.train[0].seed);
}

TEST(SynthCorpus, BalancedByDuration) {
  const auto c = synth_corpus(small_spec(), 1);
  for (const auto* split : {&c.train, &c.test}) {
    double speech = 0.0, noise = 0.0;
    for (const auto& r : *split) (r.label == Label::kSpeech ? speech : noise) += r.duration_s;
    EXPECT_EQ(speech, noise);
  }
  double train_total = 0.0;
  for (const auto& r : c.train) train_total += r.duration_s;
  EXPECT_GE(train_total, 60.0);
  EXPECT_LT(train_total, 60.0 + 2 * 6.0);
}

TEST(SynthCorpus, ClipLengthsAndKinds) {
  const auto c = synth_corpus(small_spec(), 2);
  std::set<SourceKind> kinds;
  for (const auto& r : c.train) {
    EXPECT_GE(r.duration_s, 3.0 - 1e-9);
    EXPECT_LE(r.duration_s, 6.0 + 1e-9);
    if (r.label == Label::kNoise) kinds.insert(r.kind);
    else EXPECT_EQ(r.kind, SourceKind::kSpeechLike);
  }
  EXPECT_EQ(kinds.size(), 5u);
  EXPECT_EQ(c.train[0].id, "train-0000-speech");
}

TEST(SynthCorpus, TrainAndTestSeedsDisjoint) {
  const auto c = synth_corpus(CorpusSpec{}, 0);
  std::set<std::uint64_t> train;
  for (const auto& r : c.train) train.insert(r.seed);
  EXPECT_EQ(train.size(), c.train.size());
  for (const auto& r : c.test) EXPECT_FALSE(train.count(r.seed)) << r.id;
}

TEST(SynthSpeech, SpectralPeaksAtPitchHarmonics) {
  const double fs = 44100.0;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto x = synth_speech_like(3.0, fs, seed);
    const std::size_t n = 4096;
    // Loudest window.
    std::size_t best = 0;
    double best_e = -1.0;
    for (std::size_t s = 0; s + n < x.size(); s += 1024) {
      double e = 0.0;
      for (std::size_t i = s; i < s + n; ++i) e += x[i] * x[i];
      if (e > best_e) best_e = e, best = s;
    }
    // Harmonic-sum pitch estimate over 80-360 Hz.
    double f0 = 0.0, best_hs = -1.0;
    for (double f = 80.0; f <= 360.0; f += 1.0) {
      double hs = 0.0;
      for (int k = 1; k <= 5; ++k) hs += dft_mag(x, best, n, k * f, fs);
      if (hs > best_hs) best_hs = hs, f0 = f;
    }
    const double base = speech_base_pitch_hz(seed);
    EXPECT_GE(base, 100.0);
    EXPECT_LE(base, 300.0);
    EXPECT_NEAR(std::log2(f0 / base), 0.0, 0.15) << "seed " << seed;
    double between = 0.0;
    for (int k = 1; k <= 5; ++k) between += dft_mag(x, best, n, (k + 0.5) * f0, fs);
    EXPECT_GT(best_hs, 3.0 * between) << "seed " << seed;
  }
}

TEST(SynthSpeech, HasPauses) {
  const auto x = synth_speech_like(6.0, 44100.0, 9);
  int quiet = 0, blocks = 0;
  for (std::size_t s = 0; s + 2205 <= x.size(); s += 2205, ++blocks) {
    double e = 0.0;
    for (std::size_t i = s; i < s + 2205; ++i) e += x[i] * x[i];
    quiet += e < 1e-6 * 2205;
  }
  EXPECT_GT(quiet, 0);
  EXPECT_LT(quiet, blocks);
}

TEST(SynthNoise, AllKindsRenderFiniteNonSilent) {
  for (auto kind : {SourceKind::kBandNoise, SourceKind::kModulatedNoise, SourceKind::kTones,
                    SourceKind::kChirps, SourceKind::kMusicLike}) {
    const auto x = synth_noise_like(kind, 1.0, 44100.0, 3);
    EXPECT_EQ(x.size(), 44100u) << to_string(kind);
    EXPECT_GT(rms(x), 0.0) << to_string(kind);
    for (double v : x) ASSERT_TRUE(std::isfinite(v));
  }
}

TEST(ScanCorpusDir, ReadsSortedWavFiles) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "dascochlea_scan_test";
  fs::remove_all(root);
  const std::vector<double> tone(4410, 0.1);
  for (const char* split : {"train", "test"}) {
    for (const char* cls : {"speech", "noise"}) {
      fs::create_directories(root / split / cls);
      write_wav_pcm16(root / split / cls / "b.wav", tone, 44100.0);
      write_wav_pcm16(root / split / cls / "a.wav", tone, 44100.0);
    }
  }
  std::ofstream(root / "train" / "speech" / "notes.txt") << "ignored";
  const auto c = scan_corpus_dir(root);
  ASSERT_EQ(c.train.size(), 4u);
  EXPECT_EQ(c.train[0].id, "train/speech/a.wav");
  EXPECT_EQ(c.train[1].id, "train/speech/b.wav");
  EXPECT_EQ(c.train[2].label, Label::kNoise);
  EXPECT_NEAR(c.train[0].duration_s, 0.1, 1e-9);
  EXPECT_EQ(render(c.train[0]).size(), 4410u);
  fs::remove_all(root);
  EXPECT_THROW(scan_corpus_dir(root), InvalidArgument);
}

}  // namespace
}  // namespace dascochlea
