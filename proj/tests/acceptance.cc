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
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dascochlea/adm_encoder.h"
#include "dascochlea/agc_controller.h"
#include "dascochlea/analysis.h"
#include "dascochlea/audio.h"
#include "dascochlea/classifiers.h"
#include "dascochlea/corpus.h"
#include "dascochlea/event_file.h"
#include "dascochlea/experiment.h"
#include "dascochlea/features.h"
#include "dascochlea/filterbank.h"
#include "dascochlea/simulate.h"

namespace dascochlea {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; the criterion passes only if every one does.
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [failed]");
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// 1: channel center frequencies.
void criterion_1(Outcome& o) {
  const FilterbankConfig cfg;
  const double f0 = channel_center_freq(0, cfg);
  const double f63 = channel_center_freq(63, cfg);
  o.check(std::abs(f0 / 20000.0 - 1.0) <= 1e-3, "ch0 = " + fmt(f0, 8) + " Hz");
  o.check(f63 == 8.0, "ch63 = " + fmt(f63, 8) + " Hz");
  double worst = 0.0;
  for (int ch = 0; ch < 63; ++ch) {
    const double ratio = channel_center_freq(ch, cfg) / channel_center_freq(ch + 1, cfg);
    worst = std::max(worst, std::abs(ratio - 1.13224));
  }
  o.check(worst <= 1e-5, "max |ratio - 1.13224| = " + fmt(worst, 3));
}

// 2: averaging windows.
void criterion_2(Outcome& o) {
  const AgcParams p;
  const FilterbankConfig cfg;
  const int w30 = averaging_window_ticks(30, p, cfg);
  const int w63 = averaging_window_ticks(63, p, cfg);
  const int w0 = averaging_window_ticks(0, p, cfg);
  o.check(std::abs(w30 - 166) <= 1, "ch30 window " + fmt(w30 * 0.1) + " ms");
  o.check(w63 == 4095, "ch63 window " + fmt(w63 * 0.1, 5) + " ms");
  o.check(w0 == 4, "ch0 window " + fmt(w0 * 0.1) + " ms");
}

// 3: controller state machine against an independent reference, with
// branch tallies.
void criterion_3(Outcome& o) {
  const AgcParams p;
  enum Branch { kInc, kDec, kBand, kTopRail, kBottomRail, kOpen, kDisabled, kSaturate,
                kReset, kWindowEnd, kNumBranches };
  const char* names[] = {"increase", "decrease", "in-band", "top rail", "bottom rail",
                         "window open", "disabled", "63-saturation", "counter reset",
                         "window-end flag"};
  std::array<long, kNumBranches> hits{};
  long cases = 0, mismatches = 0;

  for (int enabled = 0; enabled <= 1; ++enabled) {
    for (int len = 1; len <= 4; ++len) {
      for (int tc = 0; tc < len; ++tc) {
        for (int count = 0; count <= 63; ++count) {
          for (int gi = 0; gi <= 11; ++gi) {
            AgcChannelRegs r;
            r.enabled = enabled;
            r.window_len_ticks = static_cast<std::uint16_t>(len);
            r.time_counter = static_cast<std::uint16_t>(tc);
            r.spike_count = static_cast<std::uint8_t>(count);
            r.gain_index = static_cast<std::uint8_t>(gi);
            r.window_end = true;
            const auto got = tick(r, p);
            ++cases;

            // Reference behaviour.
            bool closes = false;
            int want_gi = gi, want_count = count, want_tc = tc;
            GainDecision want_dec = GainDecision::kNone;
            if (!enabled) {
              ++hits[kDisabled];
            } else if (tc + 1 < len) {
              want_tc = tc + 1;
              ++hits[kOpen];
            } else {
              closes = true;
              if (count >= 16) {
                if (gi > 0) {
                  want_gi = gi - 1;
                  want_dec = GainDecision::kDecrease;
                  ++hits[kDec];
                } else {
                  ++hits[kBottomRail];
                }
              } else if (count < 1) {
                if (gi < 11) {
                  want_gi = gi + 1;
                  want_dec = GainDecision::kIncrease;
                  ++hits[kInc];
                } else {
                  ++hits[kTopRail];
                }
              } else {
                ++hits[kBand];
              }
              want_count = 0;
              want_tc = 0;
              if (count > 0) ++hits[kReset];
              ++hits[kWindowEnd];
            }
            bool ok = got.has_value() == closes && r.gain_index == want_gi &&
                      r.spike_count == want_count && r.time_counter == want_tc &&
                      r.window_end == closes && r.time_counter <= r.window_len_ticks;
            if (ok && got) {
              ok = got->decision == want_dec && got->gain_index == want_gi &&
                   got->spike_count == count;
            }
            mismatches += !ok;
          }
        }
      }
    }
  }
  // Saturation through the event path.
  AgcChannelRegs r;
  r.enabled = true;
  for (int i = 0; i < 100; ++i) on_spike(r, {0, 0, Polarity::kOn, 11}, p);
  if (r.spike_count == 63) ++hits[kSaturate];
  mismatches += r.spike_count != 63;

  o.check(mismatches == 0, std::to_string(cases) + " register states, " +
                               std::to_string(mismatches) + " mismatches");
  int covered = 0;
  std::string missing;
  for (int b = 0; b < kNumBranches; ++b) {
    if (hits[b] > 0) {
      ++covered;
    } else {
      missing += std::string(" ") + names[b];
    }
  }
  o.check(covered == kNumBranches, "branches covered " + std::to_string(covered) + "/" +
                                       std::to_string(kNumBranches) + missing);
}

// 4: update queue timing, FIFO order, overflow.
void criterion_4(Outcome& o) {
  AgcParams p;
  p.initial_gain_index = 5;
  AgcController ctl(p, FilterbankConfig{}, ChannelRange{20, 22});
  for (int ch = 20; ch <= 22; ++ch) ctl.regs(ch).window_len_ticks = 1000;
  for (int ch = 20; ch <= 22; ++ch) ctl.regs(ch).time_counter = 999;
  std::vector<ScheduledGainUpdate> applied;
  AgcController::TickOutput out;
  for (TimestampUs t = 100; t <= 5000; t += 100) {
    out.clear();
    ctl.tick(t, out);
    applied.insert(applied.end(), out.updates.begin(), out.updates.end());
  }
  bool timing = applied.size() == 3;
  std::string times;
  if (timing) {
    const TimestampUs t0 = applied[0].apply_time_us;
    for (int i = 0; i < 3; ++i) {
      const TimestampUs dt = applied[i].apply_time_us - t0;
      times += (i ? "/" : "") + fmt(dt / 1000.0) + "ms";
      timing = timing && std::abs(dt - 500 * i) <= 100 && applied[i].channel == 20 + i;
    }
  }
  o.check(timing, "3 simultaneous requests applied at t0+" + times);

  std::mt19937_64 rng(2024);
  int order_failures = 0;
  std::uint64_t drops_seen = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    GainUpdateQueue q(128);
    std::deque<GainUpdateRequest> model;
    std::uint64_t model_drops = 0;
    const int ops = std::uniform_int_distribution<int>(50, 600)(rng);
    const double p_enqueue = std::uniform_real_distribution<double>(0.3, 0.95)(rng);
    for (int i = 0; i < ops; ++i) {
      if (std::uniform_real_distribution<double>(0, 1)(rng) < p_enqueue) {
        const GainUpdateRequest r{static_cast<std::uint8_t>(rng() % 64),
                                  static_cast<std::uint8_t>(rng() % 12), i};
        const bool accepted = q.enqueue(r);
        if (model.size() < 128) {
          model.push_back(r);
          order_failures += !accepted;
        } else {
          ++model_drops;
          order_failures += accepted;
        }
      } else {
        const auto got = q.dequeue();
        if (model.empty()) {
          order_failures += got.has_value();
        } else {
          order_failures += !got || !(*got == model.front());
          model.pop_front();
        }
      }
      order_failures += q.depth() != model.size();
    }
    while (!model.empty()) {
      const auto got = q.dequeue();
      order_failures += !got || !(*got == model.front());
      model.pop_front();
    }
    order_failures += q.dropped() != model_drops;
    drops_seen += model_drops;
  }
  o.check(order_failures == 0, "1000 random sequences, " + std::to_string(order_failures) +
                                   " order/drop errors, " + std::to_string(drops_seen) +
                                   " overflow drops exercised");
  o.check(drops_seen > 0, "overflow path reached");
}

// Level-crossing reference that follows a finely interpolated signal.
std::vector<std::pair<int, int>> dense_level_crossings(std::span<const double> y, double delta,
                                                       double origin, int cap) {
  std::vector<std::pair<int, int>> out(y.size());
  long k = 0;
  double prev = origin;
  constexpr int kSub = 32;
  for (std::size_t n = 0; n < y.size(); ++n) {
    int on = 0, off = 0;
    for (int s = 1; s <= kSub; ++s) {
      const double v = s == kSub ? y[n] : prev + (y[n] - prev) * s / kSub;
      const double u = (v - origin) / delta;
      while (static_cast<long>(std::floor(u)) > k && on + off < cap) ++k, ++on;
      while (static_cast<long>(std::ceil(u)) < k && on + off < cap) --k, ++off;
    }
    out[n] = {on, off};
    prev = y[n];
  }
  return out;
}

// 5: ADM against the dense oracle.
void criterion_5(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AdmParams params;
  long samples = 0, mismatched = 0, recon_bad = 0, cap_samples = 0;
  for (int sig = 0; sig < 100; ++sig) {
    const std::size_t n = 4410;
    std::vector<double> y(n, 0.0);
    const int parts = 1 + static_cast<int>(u(rng) * 6);
    const double peak = 0.5 + u(rng) * (sig % 10 == 0 ? 40.0 : 8.0);
    double bound = 0.0;
    for (int k = 0; k < parts; ++k) {
      const double f = 20.0 + u(rng) * 5000.0;
      const double a = 0.2 + u(rng);
      const double ph = u(rng) * 6.283185307179586;
      bound += a;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * std::sin(6.283185307179586 * f * static_cast<double>(i) / 44100.0 + ph);
      }
    }
    for (double& v : y) v *= peak / bound;

    const double origin = params.reference_offset * params.delta;
    const auto ref = dense_level_crossings(y, params.delta, origin, params.max_events_per_sample);
    AdmState st(params);
    std::vector<SpikeEvent> ev;
    for (std::size_t i = 0; i < n; ++i) {
      ev.clear();
      adm_step(st, y[i], static_cast<TimestampUs>(i), 0, 11, ev);
      int on = 0, off = 0;
      for (const auto& e : ev) (e.polarity == Polarity::kOn ? on : off) += 1;
      const bool mixed = on > 0 && off > 0;
      mismatched += mixed || on != ref[i].first || off != ref[i].second;
      const bool capped = on + off >= params.max_events_per_sample;
      cap_samples += capped;
      if (!capped) recon_bad += !(std::abs(y[i] - st.level()) < params.delta);
      ++samples;
    }
  }
  o.check(mismatched == 0, "100 signals, " + std::to_string(samples) + " samples, " +
                               std::to_string(mismatched) + " count/polarity mismatches");
  o.check(recon_bad == 0, "reconstruction error >= delta at " + std::to_string(recon_bad) +
                              " uncapped samples (" + std::to_string(cap_samples) +
                              " capped samples excluded)");
}

RateAnalysis sweep_ch30() {
  const SimulationConfig cfg;
  const double f = channel_center_freq(30, cfg.filterbank);
  return rate_analysis(30, f, log_sweep(1.0, 100.0, 20), cfg, {1.0, 2.0});
}

// 6: steady-state regulation.
void criterion_6(Outcome& o) {
  const RateAnalysis ra = sweep_ch30();
  int compensable = 0, ok = 0;
  double worst = 1.0;
  for (const auto& p : ra.points) {
    if (!p.compensable) continue;
    ++compensable;
    ok += p.in_band_fraction >= 0.9;
    worst = std::min(worst, p.in_band_fraction);
  }
  o.check(compensable > 0 && ok == compensable,
          std::to_string(ok) + "/" + std::to_string(compensable) +
              " compensable amplitudes with >=90% windows in [1,16) (worst " + fmt(worst) + ")");
  o.check(std::abs(ra.loglog_slope - 1.0) <= 0.15,
          "r_ga log-log slope " + fmt(ra.loglog_slope));
}

// 7: rate compression.
void criterion_7(Outcome& o) {
  const RateAnalysis ra = sweep_ch30();
  o.check(ra.mean_rate_hz <= 0.5 * ra.mean_rate_non_agc_hz,
          "mean rate " + fmt(ra.mean_rate_hz) + " ev/s with AGC vs " +
              fmt(ra.mean_rate_non_agc_hz) + " ev/s without, compression " +
              fmt(ra.compression, 3) + "x");
}

// 8: silence, loud speech-like onset, silence.
void criterion_8(Outcome& o) {
  const double fs = 44100.0;
  const SimulationConfig cfg;
  const auto speech = normalize_rms(synth_speech_like(2.0, fs, 17), 80.0);
  std::vector<double> x(static_cast<std::size_t>(0.5 * fs), 0.0);
  x.insert(x.end(), speech.begin(), speech.end());
  const TimestampUs speech_end = 2'500'000;
  x.insert(x.end(), static_cast<std::size_t>(3.0 * fs), 0.0);
  const SimulationResult r = simulate(x, cfg);

  int moved = 0, attack_ok = 0, regulated = 0, release_ok = 0, at_top = 0, one_step = 0;
  int longest_attack = 0;
  for (int ch = cfg.filterbank.active_channels.first; ch <= cfg.filterbank.active_channels.last;
       ++ch) {
    const auto& steps = r.gain_trace.steps(ch);
    if (steps.size() < 2) continue;
    ++moved;
    const TimestampUs window =
        averaging_window_ticks(ch, cfg.agc, cfg.filterbank) * TimestampUs{cfg.agc.tick_us};
    // Attack: leading run of decrements, one per window.
    std::size_t i = 1;
    bool spaced = true;
    while (i < steps.size() && steps[i].second + 1 == steps[i - 1].second) {
      if (i > 1 && steps[i].first - steps[i - 1].first < window) spaced = false;
      ++i;
    }
    const int attack = static_cast<int>(i) - 1;
    longest_attack = std::max(longest_attack, attack);
    attack_ok += attack >= 1 && spaced && steps[1].first >= 500'000;
    bool steps_ok = true;
    for (std::size_t k = 1; k < steps.size(); ++k) {
      steps_ok = steps_ok && std::abs(steps[k].second - steps[k - 1].second) == 1;
    }
    one_step += steps_ok;
    // Regulation reached: an in-band window after the attack, before the speech ends.
    for (const auto& w : r.windows) {
      if (w.channel == ch && w.time_us > steps[attack].first && w.time_us < speech_end &&
          w.spike_count >= 1 && w.spike_count < 16) {
        ++regulated;
        break;
      }
    }
    bool up_only = true;
    for (std::size_t k = 1; k < steps.size(); ++k) {
      // A window that overlaps the speech may still lower the gain.
      if (steps[k].first > speech_end + window + 1'000) {
        up_only = up_only && steps[k].second > steps[k - 1].second;
      }
    }
    release_ok += up_only;
    at_top += steps.back().second == kMaxGainIndex;
  }
  o.check(moved > 0, std::to_string(moved) + " channels adapted");
  o.check(attack_ok == moved && longest_attack >= 3,
          std::to_string(attack_ok) + " start with a monotone downward run (longest " +
              std::to_string(longest_attack) + " steps)");
  o.check(one_step == moved, std::to_string(one_step) + " change by one step at a time");
  o.check(regulated == moved, std::to_string(regulated) + " reach an in-band window");
  o.check(release_ok == moved && at_top == moved,
          std::to_string(release_ok) + " only climb in trailing silence, " +
              std::to_string(at_top) + " end at index 11");
}

// 9: feature integrity.
void criterion_9(Outcome& o) {
  o.check(kFeatureDim == 152 && FrameFeature{}.values.size() == 152, "dimension 152");
  std::mt19937_64 rng(9);
  FrameOptions opts;
  opts.agc = false;
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(0, 400)(rng);
    std::vector<SpikeEvent> ev(static_cast<std::size_t>(n));
    for (auto& e : ev) {
      e.timestamp_us = std::uniform_int_distribution<TimestampUs>(0, 399'999)(rng);
      e.channel = static_cast<std::uint8_t>(rng() % 64);
      e.polarity = rng() % 2 ? Polarity::kOn : Polarity::kOff;
    }
    std::sort(ev.begin(), ev.end(),
              [](const auto& a, const auto& b) { return a.timestamp_us < b.timestamp_us; });
    const auto frames = frame_stream(ev, nullptr, 400'000, opts);
    // Naive re-scan.
    double events_active = 0.0, retained = 0.0;
    for (int ch = 12; ch <= 47; ++ch) {
      TimestampUs last = -1;
      for (const auto& e : ev) {
        if (e.channel != ch) continue;
        events_active += 1;
        if (last >= 0 && e.timestamp_us - last <= 150'000) retained += 1;
        last = e.timestamp_us;
      }
    }
    bad += frames.size() != 1 || frames[0].isi_hist().sum() != retained ||
           frames[0].channel_counts().sum() != events_active;
  }
  o.check(bad == 0, "1000 random frames, " + std::to_string(bad) + " mass/count mismatches");
  const std::vector<SpikeEvent> gap151 = {{0, 20, Polarity::kOn, 11},
                                          {151'000, 20, Polarity::kOn, 11}};
  const std::vector<SpikeEvent> gap150 = {{0, 20, Polarity::kOn, 11},
                                          {150'000, 20, Polarity::kOn, 11}};
  o.check(isi_histogram(gap151).sum() == 0.0 && isi_histogram(gap150).sum() == 1.0,
          "151 ms ISI excluded, 150 ms kept");
}

struct Blobs {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
};

Blobs make_blobs(int n, double sep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Blobs b{Eigen::MatrixXd(n, 152), Eigen::VectorXi(n)};
  for (int i = 0; i < n; ++i) {
    b.y[i] = i % 2;
    for (int j = 0; j < 152; ++j) b.x(i, j) = (b.y[i] ? sep : -sep) + g(rng);
  }
  return b;
}

double acc(const Eigen::VectorXi& pred, const Eigen::VectorXi& y) {
  return (pred.array() == y.array()).cast<double>().mean();
}

// 10: classifier sanity.
void criterion_10(Outcome& o) {
  const Blobs train = make_blobs(2000, 0.5, 1);
  const Blobs test = make_blobs(1000, 0.5, 2);
  const auto lr = lr_train(train.x, train.y);
  const double lr_acc = acc(lr.predict(test.x), test.y);
  const auto dnn = dnn_train(train.x, train.y);
  const double dnn_acc = acc(dnn.model.predict(test.x), test.y);
  o.check(lr_acc >= 0.99 && dnn_acc >= 0.99,
          "blobs: LR " + fmt(lr_acc) + ", DNN " + fmt(dnn_acc));

  Mlp<double> m(152);
  m.init(10);
  const Blobs small = make_blobs(8, 0.3, 3);
  const std::vector<int> labels(small.y.data(), small.y.data() + small.y.size());
  Mlp<double>::Vector grad;
  m.loss_and_gradient(small.x, labels, &grad);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < grad.size(); ++k) {
    const double saved = m.parameters()[k];
    m.mutable_parameters()[k] = saved + 1e-6;
    const double up = m.loss_and_gradient(small.x, labels, nullptr);
    m.mutable_parameters()[k] = saved - 1e-6;
    const double down = m.loss_and_gradient(small.x, labels, nullptr);
    m.mutable_parameters()[k] = saved;
    const double num = (up - down) / 2e-6;
    worst = std::max(worst, std::abs(num - grad[k]) /
                                std::max({std::abs(num), std::abs(grad[k]), 1e-7}));
  }
  o.check(worst <= 1e-3, "max gradient relative error " + fmt(worst, 3));

  const Eigen::Index count = Mlp<float>().parameter_count();
  o.check(count == 14146, "parameter count " + std::to_string(count) + " (expected 14146)");

  std::mt19937_64 rng(4);
  Blobs shuffled_train = train, shuffled_test = test;
  std::shuffle(shuffled_train.y.data(), shuffled_train.y.data() + shuffled_train.y.size(), rng);
  std::shuffle(shuffled_test.y.data(), shuffled_test.y.data() + shuffled_test.y.size(), rng);
  const double lr_chance =
      acc(lr_train(shuffled_train.x, shuffled_train.y).predict(shuffled_test.x), shuffled_test.y);
  const double dnn_chance = acc(
      dnn_train(shuffled_train.x, shuffled_train.y).model.predict(shuffled_test.x),
      shuffled_test.y);
  o.check(std::abs(lr_chance - 0.5) <= 0.05 && std::abs(dnn_chance - 0.5) <= 0.05,
          "shuffled labels: LR " + fmt(lr_chance) + ", DNN " + fmt(dnn_chance));
}

// 11: AGC features beat non-AGC features across amplitudes.
void criterion_11(Outcome& o) {
  ExperimentSpec spec;
  spec.train_amplitudes_mV = {15};
  spec.include_all = false;
  spec.agc = AgcMode::kBoth;
  spec.classifier = ClassifierKind::kBoth;
  const ExperimentReport report = run_experiment(spec, SimulationConfig{});
  o.check(report.failed_cells == 0, std::to_string(report.failed_cells) + " failed cells");
  for (const auto& r : report.relative_error) {
    o.check(r.mean_acc_agc >= r.mean_acc_non_agc && r.mean_seed_decrease > 0.0,
            r.classifier + ": mean acc " + fmt(r.mean_acc_agc) + " AGC vs " +
                fmt(r.mean_acc_non_agc) + " non-AGC, relative error decrease " +
                fmt(r.mean_seed_decrease, 3) + "%");
  }
  o.check(report.relative_error.size() == 2, "both classifiers reported");
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 12: determinism and event-file round trip.
void criterion_12(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / "dascochlea_acceptance_12";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Corpus corpus = synth_corpus(CorpusSpec{}, 0);
  auto run_once = [&](const fs::path& out) {
    const RecordingSpec& rec = corpus.train[0];
    const auto x = normalize_rms(render(rec), 15.0);
    const SimulationResult r = simulate(x, SimulationConfig{});
    EventFileHeader h;
    h.gain_table_db = default_gain_table_db();
    h.amplitude_mV = 15.0;
    h.label = rec.label;
    h.source_id = rec.id;
    write_event_file(out, h, r.events);
  };
  run_once(dir / "a.dase");
  run_once(dir / "b.dase");
  const std::string a = file_bytes(dir / "a.dase"), b = file_bytes(dir / "b.dase");
  o.check(!a.empty() && a == b, "event files identical (" + std::to_string(a.size()) + " bytes)");

  ExperimentSpec spec;
  SyntheticCorpus syn;
  syn.spec.train_minutes = 0.2;
  syn.spec.test_minutes = 0.2;
  spec.corpus = syn;
  spec.train_amplitudes_mV = {15};
  spec.test_amplitudes_mV = {5, 50};
  spec.include_all = false;
  spec.classifier = ClassifierKind::kLr;
  spec.seeds = {0};
  write_report(run_experiment(spec, SimulationConfig{}), dir / "r1");
  write_report(run_experiment(spec, SimulationConfig{}), dir / "r2");
  bool same = true;
  for (const char* f : {"accuracy_cells.csv", "mean_accuracy.csv", "relative_error.csv"}) {
    same = same && file_bytes(dir / "r1" / f) == file_bytes(dir / "r2" / f);
  }
  o.check(same, "reports identical");

  std::mt19937_64 rng(12);
  std::vector<SpikeEvent> ev(10000);
  TimestampUs t = 0;
  for (auto& e : ev) {
    t += static_cast<TimestampUs>(rng() % 500);
    e = {t, static_cast<std::uint8_t>(rng() % 64), rng() % 2 ? Polarity::kOn : Polarity::kOff,
         static_cast<std::uint8_t>(rng() % 12)};
  }
  EventFileHeader h;
  h.gain_table_db = default_gain_table_db();
  h.source_id = "random";
  write_event_file(dir / "rt.dase", h, ev);
  EventFileHeader h2;
  std::vector<SpikeEvent> ev2;
  read_event_file(dir / "rt.dase", h2, ev2);
  o.check(h2 == h && ev2 == ev, "10k event write/read identity");
  fs::remove_all(dir);
}

// 13: throughput.
void criterion_13(Outcome& o) {
  const double fs = 44100.0;
  const auto x = normalize_rms(synth_speech_like(10.0, fs, 13), 15.0);
  const auto start = std::chrono::steady_clock::now();
  const SimulationResult r = simulate(x, SimulationConfig{});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < 10.0, "10 s of audio, 36 channels, AGC on: " + fmt(secs, 3) + " s wall-clock (" +
                           std::to_string(r.events.size()) + " events)");
}

struct Criterion {
  std::function<void(Outcome&)> run;
  double budget_s;
};

}  // namespace
}  // namespace dascochlea

int main(int argc, char** argv) {
  using namespace dascochlea;
  CLI::App app{"dascochlea acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria (1-13)")->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, Criterion> criteria = {
      {1, {criterion_1, 1}},    {2, {criterion_2, 1}},     {3, {criterion_3, 5}},
      {4, {criterion_4, 10}},   {5, {criterion_5, 30}},    {6, {criterion_6, 120}},
      {7, {criterion_7, 120}},  {8, {criterion_8, 30}},    {9, {criterion_9, 10}},
      {10, {criterion_10, 120}}, {11, {criterion_11, 900}}, {12, {criterion_12, 10}},
      {13, {criterion_13, 0}},
  };
  bool all_pass = true;
  for (const auto& [id, c] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0) {
      o.check(secs < c.budget_s, "runtime " + fmt(secs, 3) + " s (budget " +
                                     fmt(c.budget_s) + " s)");
    }
    all_pass = all_pass && o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail.str()
              << ")" << std::endl;
  }
  return all_pass ? 0 : 1;
}
