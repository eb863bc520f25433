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
#include "dascochlea/audio.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dascochlea/common.h"

namespace dascochlea {
namespace {

std::uint32_t read_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

std::string encoding_name(std::uint16_t tag) {
  switch (tag) {
    case 0x0002:
      return "Microsoft ADPCM";
    case 0x0006:
      return "A-law";
    case 0x0007:
      return "mu-law";
    case 0x0011:
      return "IMA ADPCM";
    case 0x0055:
      return "MPEG Layer 3";
    default:
      return "format tag " + std::to_string(tag);
  }
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b = {char(v & 0xFF), char(v >> 8 & 0xFF),
                                 char(v >> 16 & 0xFF), char(v >> 24 & 0xFF)};
  os.write(b.data(), 4);
}

void put_u16(std::ostream& os, std::uint16_t v) {
  const std::array<char, 2> b = {char(v & 0xFF), char(v >> 8 & 0xFF)};
  os.write(b.data(), 2);
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw UnsupportedAudio(path.string() + ": not a RIFF/WAVE file");
  }

  std::uint16_t tag = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(len, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw UnsupportedAudio(path.string() + ": short fmt chunk");
      tag = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (tag == 0xFFFE && avail >= 26) tag = read_u16(chunk + 8 + 24);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_len = avail;
    }
    pos = body + len + (len & 1);
  }
  if (channels == 0 || rate == 0) throw UnsupportedAudio(path.string() + ": missing fmt chunk");
  if (data == nullptr) throw UnsupportedAudio(path.string() + ": missing data chunk");

  const bool pcm = tag == 1 && (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool ieee = tag == 3 && (bits == 32 || bits == 64);
  if (!pcm && !ieee) {
    const std::string what = (tag == 1 || tag == 3)
                                 ? std::string(tag == 1 ? "PCM" : "IEEE float") + " with " +
                                       std::to_string(bits) + " bits per sample"
                                 : encoding_name(tag);
    throw UnsupportedAudio(path.string() + ": unsupported WAV encoding: " + what);
  }

  const std::size_t width = bits / 8;
  const std::size_t frames = data_len / (width * channels);
  AudioBuffer out;
  out.sample_rate_hz = rate;
  out.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + (f * channels + c) * width;
      double v = 0.0;
      if (ieee && bits == 32) {
        float x;
        const std::uint32_t u = read_u32(p);
        std::memcpy(&x, &u, 4);
        v = x;
      } else if (ieee) {
        const std::uint64_t u = std::uint64_t(read_u32(p)) | std::uint64_t(read_u32(p + 4)) << 32;
        std::memcpy(&v, &u, 8);
      } else if (bits == 8) {
        v = (static_cast<int>(p[0]) - 128) / 128.0;
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else if (bits == 24) {
        std::int32_t s = p[0] | p[1] << 8 | p[2] << 16;
        if (s & 0x800000) s -= 0x1000000;
        v = s / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
      }
      acc += v;
    }
    out.samples[f] = acc / channels;
  }
  return out;
}

std::vector<double> resample_linear(std::span<const double> samples, double from_hz,
                                    double to_hz) {
  if (!(from_hz > 0.0) || !(to_hz > 0.0)) throw InvalidArgument("sample rates must be positive");
  if (from_hz == to_hz || samples.empty()) return {samples.begin(), samples.end()};
  const auto n_out = static_cast<std::size_t>(
      std::floor(static_cast<double>(samples.size() - 1) * to_hz / from_hz)) + 1;
  std::vector<double> out(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double t = static_cast<double>(i) * from_hz / to_hz;
    const auto k = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(k);
    const double a = samples[std::min(k, samples.size() - 1)];
    const double b = samples[std::min(k + 1, samples.size() - 1)];
    out[i] = a + frac * (b - a);
  }
  return out;
}

std::vector<double> load_audio(const std::filesystem::path& path, double target_rate_hz) {
  const AudioBuffer buf = read_wav(path);
  return resample_linear(buf.samples, buf.sample_rate_hz, target_rate_hz);
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples,
                     double sample_rate_hz) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  const auto rate = static_cast<std::uint32_t>(std::lround(sample_rate_hz));
  const auto data_len = static_cast<std::uint32_t>(samples.size() * 2);
  os.write("RIFF", 4);
  put_u32(os, 36 + data_len);
  os.write("WAVEfmt ", 8);
  put_u32(os, 16);
  put_u16(os, 1);
  put_u16(os, 1);
  put_u32(os, rate);
  put_u32(os, rate * 2);
  put_u16(os, 2);
  put_u16(os, 16);
  os.write("data", 4);
  put_u32(os, data_len);
  for (double x : samples) {
    const double c = std::clamp(x, -1.0, 1.0);
    put_u16(os, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32767.0))));
  }
}

double rms(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double x : samples) acc += x * x;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

std::vector<double> normalize_rms(std::span<const double> samples, double target_mV) {
  if (!(target_mV >= 0.0)) throw InvalidArgument("target amplitude must be non-negative");
  const double current = rms(samples);
  if (!(current > 0.0)) throw InvalidArgument("cannot normalize silent audio");
  const double scale = (target_mV / kFullScaleMilliVolts) / current;
  std::vector<double> out(samples.begin(), samples.end());
  for (double& x : out) x *= scale;
  return out;
}

}  // namespace dascochlea
