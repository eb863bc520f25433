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

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "dascochlea/audio.h"
#include "dascochlea/filterbank.h"

namespace dascochlea {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

std::size_t sample_count(double seconds, double fs) {
  return static_cast<std::size_t>(std::llround(seconds * fs));
}

struct Vowel {
  double f1, f2, f3;
};
constexpr std::array<Vowel, 6> kVowels = {{{730, 1090, 2440},
                                           {270, 2290, 3010},
                                           {300, 870, 2240},
                                           {530, 1840, 2480},
                                           {570, 840, 2410},
                                           {660, 1720, 2410}}};

// Magnitude of a second-order resonance at f.
double resonance(double f, double center, double bandwidth) {
  const double r = f / center;
  return 1.0 / std::sqrt((1.0 - r * r) * (1.0 - r * r) +
                         (f * bandwidth / (center * center)) *
                             (f * bandwidth / (center * center)));
}

double formant_gain(double f, const Vowel& v) {
  return resonance(f, v.f1, 80.0) + 0.7 * resonance(f, v.f2, 110.0) +
         0.35 * resonance(f, v.f3, 160.0);
}

// Adds sum_k amp_k(f) * sin(k * phase) for a slowly varying fundamental.
// amp is evaluated once per block.
template <typename AmpFn>
void add_harmonic_stack(std::vector<double>& out, std::size_t begin, std::size_t end,
                        double fs, double f_start, double f_end, double max_hz,
                        double& phase, AmpFn amp, std::span<const double> envelope) {
  constexpr std::size_t kBlock = 32;
  std::vector<double> amps;
  const double len = static_cast<double>(std::max<std::size_t>(end - begin, 1));
  for (std::size_t b = begin; b < end; b += kBlock) {
    const std::size_t stop = std::min(end, b + kBlock);
    const double f0 = f_start + (f_end - f_start) * static_cast<double>(b - begin) / len;
    const int k_max = std::max(1, static_cast<int>(max_hz / f0));
    amps.resize(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) amps[static_cast<std::size_t>(k - 1)] = amp(k, k * f0);
    for (std::size_t i = b; i < stop; ++i) {
      phase += kTwoPi * f0 / fs;
      if (phase > kTwoPi) phase -= kTwoPi;
      const double s1 = std::sin(phase);
      const double c2 = 2.0 * std::cos(phase);
      double prev = 0.0, cur = s1, acc = 0.0;
      for (int k = 1; k <= k_max; ++k) {
        acc += amps[static_cast<std::size_t>(k - 1)] * cur;
        const double next = c2 * cur - prev;
        prev = cur;
        cur = next;
      }
      out[i] += envelope[i - begin] * acc;
    }
  }
}

std::vector<double> hann_envelope(std::size_t n, double edge_fraction) {
  std::vector<double> env(n, 1.0);
  const auto edge = std::max<std::size_t>(1, static_cast<std::size_t>(edge_fraction * n));
  for (std::size_t i = 0; i < n && i < edge; ++i) {
    const double w = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / edge);
    env[i] *= w;
    env[n - 1 - i] *= w;
  }
  return env;
}

std::vector<double> filtered_noise(std::size_t n, double fs, double center_hz, double q,
                                   int sections, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Biquad<double>> bq(static_cast<std::size_t>(sections),
                                 Biquad<double>::bandpass(center_hz, q, fs));
  std::vector<double> out(n);
  for (auto& x : out) {
    double v = gauss(rng);
    for (auto& b : bq) v = b.process(v);
    x = v;
  }
  return out;
}

// Smooth random gain in dB, linearly interpolated between knots.
std::vector<double> slow_gain(std::size_t n, double fs, double knot_s, double spread_db,
                              std::mt19937_64& rng) {
  const auto step = std::max<std::size_t>(1, sample_count(knot_s, fs));
  std::vector<double> knots(n / step + 2);
  for (auto& k : knots) k = uniform(rng, -spread_db, spread_db);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i / step;
    const double frac = static_cast<double>(i % step) / static_cast<double>(step);
    g[i] = std::pow(10.0, (knots[j] + frac * (knots[j + 1] - knots[j])) / 20.0);
  }
  return g;
}

std::vector<double> band_noise(std::size_t n, double fs, std::mt19937_64& rng) {
  const double fc = log_uniform(rng, 150.0, 4000.0);
  auto out = filtered_noise(n, fs, fc, uniform(rng, 0.5, 2.0), 2, rng);
  const auto g = slow_gain(n, fs, uniform(rng, 0.5, 2.0), 3.0, rng);
  for (std::size_t i = 0; i < n; ++i) out[i] *= g[i];
  return out;
}

std::vector<double> modulated_noise(std::size_t n, double fs, std::mt19937_64& rng) {
  auto out = filtered_noise(n, fs, log_uniform(rng, 300.0, 2000.0), 0.7, 1, rng);
  const double f_am = uniform(rng, 0.5, 4.0);
  const double depth = uniform(rng, 0.3, 0.8);
  const double ph = uniform(rng, 0.0, kTwoPi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] *= 1.0 + depth * std::sin(kTwoPi * f_am * static_cast<double>(i) / fs + ph);
  }
  return out;
}

std::vector<double> tones(std::size_t n, double fs, std::mt19937_64& rng) {
  std::vector<double> out(n, 0.0);
  const int count = std::uniform_int_distribution<int>(1, 3)(rng);
  const bool gated = uniform(rng, 0.0, 1.0) < 0.4;
  const double gate_hz = uniform(rng, 0.5, 3.0);
  const double duty = uniform(rng, 0.3, 0.8);
  for (int t = 0; t < count; ++t) {
    const double f = log_uniform(rng, 100.0, 3000.0);
    const double fm_depth = uniform(rng, 0.0, 0.06);
    const double fm_rate = uniform(rng, 0.2, 6.0);
    const double amp = uniform(rng, 0.3, 1.0);
    double phase = uniform(rng, 0.0, kTwoPi);
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = static_cast<double>(i) / fs;
      phase += kTwoPi * f * (1.0 + fm_depth * std::sin(kTwoPi * fm_rate * ti)) / fs;
      out[i] += amp * std::sin(phase);
    }
  }
  if (gated) {
    for (std::size_t i = 0; i < n; ++i) {
      const double cycle = std::fmod(static_cast<double>(i) / fs * gate_hz, 1.0);
      if (cycle >= duty) out[i] = 0.0;
    }
  }
  return out;
}

std::vector<double> chirps(std::size_t n, double fs, std::mt19937_64& rng) {
  std::vector<double> out(n, 0.0);
  const double f_lo = log_uniform(rng, 100.0, 500.0);
  const double f_hi = log_uniform(rng, 1000.0, 4000.0);
  const double sweep_s = uniform(rng, 0.2, 1.5);
  const double gap_s = uniform(rng, 0.0, 0.3);
  const bool up_down = uniform(rng, 0.0, 1.0) < 0.5;
  const double period = sweep_s + gap_s;
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i) / fs;
    const double pos = std::fmod(ti, period);
    if (pos >= sweep_s) continue;
    double u = pos / sweep_s;
    if (up_down && static_cast<long>(ti / period) % 2 == 1) u = 1.0 - u;
    const double f = f_lo * std::pow(f_hi / f_lo, u);
    phase += kTwoPi * f / fs;
    out[i] = std::sin(phase);
  }
  return out;
}

std::vector<double> music_like(std::size_t n, double fs, std::mt19937_64& rng) {
  std::vector<double> out(n, 0.0);
  const double tilt = uniform(rng, 1.0, 2.0);
  const double decay_s = uniform(rng, 0.2, 1.0);
  const int voices = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int v = 0; v < voices; ++v) {
    std::size_t pos = 0;
    while (pos < n) {
      const int semitone = std::uniform_int_distribution<int>(0, 36)(rng);
      const double f0 = 110.0 * std::pow(2.0, semitone / 12.0);
      const std::size_t len = std::min(n - pos, sample_count(uniform(rng, 0.15, 0.6), fs));
      std::vector<double> env(len);
      const double attack = 0.01 * fs;
      for (std::size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i);
        env[i] = std::min(1.0, t / attack) * std::exp(-t / (decay_s * fs));
      }
      double phase = 0.0;
      add_harmonic_stack(out, pos, pos + len, fs, f0, f0, 5000.0, phase,
                         [&](int k, double) { return std::pow(k, -tilt); }, env);
      pos += len;
    }
  }
  return out;
}

}  // namespace

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kSpeechLike:
      return "speech_like";
    case SourceKind::kBandNoise:
      return "band_noise";
    case SourceKind::kModulatedNoise:
      return "modulated_noise";
    case SourceKind::kTones:
      return "tones";
    case SourceKind::kChirps:
      return "chirps";
    case SourceKind::kMusicLike:
      return "music_like";
    case SourceKind::kFile:
      return "file";
  }
  return "?";
}

void CorpusSpec::validate() const {
  if (!(train_minutes > 0.0) || !(test_minutes > 0.0)) {
    throw InvalidArgument("corpus durations must be positive");
  }
  if (!(clip_min_s > 0.0) || clip_max_s < clip_min_s) {
    throw InvalidArgument("clip length bounds must satisfy 0 < min <= max");
  }
  if (!(sample_rate_hz > 0.0)) throw InvalidArgument("sample rate must be positive");
}

double speech_base_pitch_hz(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return uniform(rng, 100.0, 300.0);
}

std::vector<double> synth_speech_like(double seconds, double fs, std::uint64_t seed) {
  const std::size_t n = sample_count(seconds, fs);
  std::vector<double> out(n, 0.0);
  std::mt19937_64 rng(seed);
  const double base = uniform(rng, 100.0, 300.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::size_t pos = sample_count(uniform(rng, 0.05, 0.3), fs);
  double phase = 0.0;
  double pitch = base * std::pow(2.0, uniform(rng, -0.1, 0.1));
  while (pos < n) {
    const double rate = uniform(rng, 2.0, 8.0);
    const int syllables = std::uniform_int_distribution<int>(2, 6)(rng);
    for (int s = 0; s < syllables && pos < n; ++s) {
      const std::size_t syl = sample_count(1.0 / rate, fs);
      const std::size_t v_len = std::min(n - pos, static_cast<std::size_t>(
                                                      static_cast<double>(syl) *
                                                      uniform(rng, 0.6, 0.85)));
      Vowel vw = kVowels[std::uniform_int_distribution<std::size_t>(0, kVowels.size() - 1)(rng)];
      const double scale = uniform(rng, 0.9, 1.1);
      vw = {vw.f1 * scale, vw.f2 * scale, vw.f3 * scale};
      const double next_pitch = base * std::pow(2.0, uniform(rng, -0.1, 0.1));
      const double level = uniform(rng, 0.5, 1.0);
      const auto env = hann_envelope(v_len, 0.3);
      std::vector<double> scaled(env);
      for (auto& e : scaled) e *= level;
      add_harmonic_stack(out, pos, pos + v_len, fs, pitch, next_pitch, 5000.0, phase,
                         [&](int k, double f) { return formant_gain(f, vw) / k; }, scaled);
      // Occasional fricative onset.
      if (uniform(rng, 0.0, 1.0) < 0.4) {
        const std::size_t f_len = std::min(n - pos, sample_count(uniform(rng, 0.02, 0.06), fs));
        Biquad<double> bq = Biquad<double>::bandpass(uniform(rng, 3000.0, 5000.0), 1.0, fs);
        const double f_amp = level * uniform(rng, 0.1, 0.3);
        const auto f_env = hann_envelope(f_len, 0.2);
        for (std::size_t i = 0; i < f_len; ++i) out[pos + i] += f_amp * f_env[i] * bq.process(gauss(rng));
      }
      pitch = next_pitch;
      pos += std::max(syl, v_len);
    }
    pos += sample_count(uniform(rng, 0.15, 0.5), fs);
  }
  return out;
}

std::vector<double> synth_noise_like(SourceKind kind, double seconds, double fs,
                                     std::uint64_t seed) {
  const std::size_t n = sample_count(seconds, fs);
  std::mt19937_64 rng(seed);
  switch (kind) {
    case SourceKind::kBandNoise:
      return band_noise(n, fs, rng);
    case SourceKind::kModulatedNoise:
      return modulated_noise(n, fs, rng);
    case SourceKind::kTones:
      return tones(n, fs, rng);
    case SourceKind::kChirps:
      return chirps(n, fs, rng);
    case SourceKind::kMusicLike:
      return music_like(n, fs, rng);
    default:
      throw InvalidArgument(std::string("not a noise source: ") + to_string(kind));
  }
}

Corpus synth_corpus(const CorpusSpec& spec, std::uint64_t seed) {
  spec.validate();
  constexpr std::array<SourceKind, 5> kNoiseKinds = {
      SourceKind::kBandNoise, SourceKind::kModulatedNoise, SourceKind::kTones,
      SourceKind::kChirps, SourceKind::kMusicLike};
  Corpus corpus;
  auto fill = [&](std::vector<RecordingSpec>& out, double minutes, std::uint64_t split,
                  const char* prefix) {
    std::mt19937_64 rng(derive_seed(seed, split, 0));
    // Each pair contributes twice its clip length.
    const double target_s = minutes * 60.0;
    double total = 0.0;
    for (std::uint64_t i = 0; total < target_s; ++i) {
      double d = uniform(rng, spec.clip_min_s, spec.clip_max_s);
      d = std::min(d, std::max((target_s - total) / 2.0, spec.clip_min_s));
      d = static_cast<double>(sample_count(d, spec.sample_rate_hz)) / spec.sample_rate_hz;
      std::ostringstream stem_os;
      stem_os << prefix << '-' << std::setw(4) << std::setfill('0') << i;
      const std::string stem = stem_os.str();
      const SourceKind nk = kNoiseKinds[i % kNoiseKinds.size()];
      out.push_back({stem + "-speech", Label::kSpeech, SourceKind::kSpeechLike, d,
                     derive_seed(seed, split, 2 * i + 1), {}});
      out.push_back({stem + "-noise-" + to_string(nk), Label::kNoise, nk, d,
                     derive_seed(seed, split, 2 * i + 2), {}});
      total += 2.0 * d;
    }
  };
  fill(corpus.train, spec.train_minutes, 1, "train");
  fill(corpus.test, spec.test_minutes, 2, "test");
  return corpus;
}

Corpus scan_corpus_dir(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw InvalidArgument("corpus directory not found: " + root.string());
  Corpus corpus;
  for (const auto& [split, dest] : {std::pair<const char*, std::vector<RecordingSpec>*>{"train", &corpus.train},
                                    {"test", &corpus.test}}) {
    for (const auto& [cls, label] : {std::pair{"speech", Label::kSpeech}, std::pair{"noise", Label::kNoise}}) {
      const fs::path dir = root / split / cls;
      if (!fs::is_directory(dir)) continue;
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        const AudioBuffer buf = read_wav(f);
        dest->push_back({fs::relative(f, root).generic_string(), label, SourceKind::kFile,
                         static_cast<double>(buf.samples.size()) / buf.sample_rate_hz, 0, f});
      }
    }
  }
  if (corpus.train.empty() || corpus.test.empty()) {
    throw InvalidArgument("corpus directory needs train/ and test/ wav files: " + root.string());
  }
  return corpus;
}

std::vector<double> render(const RecordingSpec& rec, double fs) {
  if (rec.kind == SourceKind::kFile) return load_audio(rec.path, fs);
  if (rec.kind == SourceKind::kSpeechLike) return synth_speech_like(rec.duration_s, fs, rec.seed);
  return synth_noise_like(rec.kind, rec.duration_s, fs, rec.seed);
}

}  // namespace dascochlea
