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
#include "dascochlea/analysis.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "dascochlea/audio.h"

namespace dascochlea {

double mean_gain_db(const GainTrace& trace, int channel, TimestampUs start_us,
                    TimestampUs end_us, std::span<const double> gain_table_db) {
  if (end_us <= start_us) throw InvalidArgument("empty interval");
  const auto& steps = trace.steps(channel);
  double acc = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const TimestampUs lo = std::max(start_us, steps[i].first);
    const TimestampUs hi = std::min(end_us, i + 1 < steps.size() ? steps[i + 1].first : end_us);
    if (hi > lo) acc += gain_table_db[steps[i].second] * static_cast<double>(hi - lo);
  }
  if (steps.empty() || steps.front().first > start_us) {
    throw InvalidArgument("gain trace does not cover the interval");
  }
  return acc / static_cast<double>(end_us - start_us);
}

int steady_window_count(double output_peak, const AdmParams& adm, const AgcParams& agc) {
  // Lattice levels (k + offset) * delta inside [-peak, peak].
  const double d = adm.delta;
  const double o = adm.reference_offset / d;
  const auto k_hi = static_cast<long>(std::floor(output_peak / d - o));
  const auto k_lo = static_cast<long>(std::ceil(-output_peak / d - o));
  const long levels = std::max(0L, k_hi - k_lo + 1);
  const long on_per_period = std::max(0L, levels - 1);
  const long per_period = agc.counted_polarity == CountedPolarity::kBoth ? 2 * on_per_period
                                                                         : on_per_period;
  return static_cast<int>(std::min<long>(per_period * agc.n_periods, agc.counter_max));
}

bool is_compensable(int channel, double freq_hz, double amplitude_mV,
                    const SimulationConfig& cfg) {
  const auto filt = design_channel<double>(channel, cfg.filterbank);
  const double h = std::abs(filt.bandpass_response(freq_hz));
  const double peak_in = std::numbers::sqrt2 * amplitude_mV / kFullScaleMilliVolts;
  for (int gi = 0; gi < kGainLevels; ++gi) {
    const int count =
        steady_window_count(peak_in * cfg.filterbank.gain_linear(gi) * h, cfg.adm, cfg.agc);
    if (count >= cfg.agc.t_lower && count < cfg.agc.t_upper) return true;
  }
  return false;
}

std::vector<double> log_sweep(double lo_mV, double hi_mV, int count) {
  if (!(lo_mV > 0.0) || !(hi_mV >= lo_mV) || count < 1) {
    throw InvalidArgument("log sweep needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] = lo_mV * std::pow(hi_mV / lo_mV, u);
  }
  return out;
}

RateAnalysis rate_analysis(int channel, double freq_hz, std::span<const double> amplitudes_mV,
                           const SimulationConfig& cfg_in, const RateAnalysisOptions& opts) {
  check_channel(channel);
  if (!(freq_hz > 0.0)) throw InvalidArgument("frequency must be positive");
  if (!(opts.measure_s > 0.0) || opts.settle_s < 0.0) {
    throw InvalidArgument("settle must be >= 0 and measure > 0");
  }
  SimulationConfig cfg = cfg_in;
  cfg.filterbank.active_channels = {channel, channel};
  cfg.validate();
  const double fs = cfg.filterbank.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround((opts.settle_s + opts.measure_s) * fs));
  const auto settle_us = static_cast<TimestampUs>(std::llround(opts.settle_s * 1e6));
  const double periods = opts.measure_s * freq_hz;
  const double gmax_db = *std::max_element(cfg.filterbank.gain_table_db.begin(),
                                           cfg.filterbank.gain_table_db.end());

  RateAnalysis out;
  out.channel = channel;
  out.freq_hz = freq_hz;
  std::vector<double> sig(n);
  for (double amp : amplitudes_mV) {
    if (amp < 0.0) throw InvalidArgument("amplitudes must be non-negative");
    const double peak = std::numbers::sqrt2 * amp / kFullScaleMilliVolts;
    for (std::size_t i = 0; i < n; ++i) {
      sig[i] = peak * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / fs);
    }
    RatePoint p;
    p.amplitude_mV = amp;
    p.compensable = amp > 0.0 && is_compensable(channel, freq_hz, amp, cfg);
    for (bool agc : {true, false}) {
      SimulateOptions so;
      so.agc_on = agc;
      const SimulationResult r = simulate(sig, cfg, so);
      long on = 0, all = 0;
      for (const SpikeEvent& ev : r.events) {
        if (ev.timestamp_us < settle_us) continue;
        ++all;
        on += ev.polarity == Polarity::kOn;
      }
      const double norm = static_cast<double>(on) / periods;
      const double rate = static_cast<double>(all) / opts.measure_s;
      if (agc) {
        p.norm_rate = norm;
        p.spike_rate_hz = rate;
        p.mean_gain_index = r.gain_trace.mean(channel, settle_us, r.duration_us);
        p.mean_gain_db = mean_gain_db(r.gain_trace, channel, settle_us, r.duration_us,
                                      cfg.filterbank.gain_table_db);
        p.r_ga = gain_adjusted_rate(norm, p.mean_gain_db, gmax_db);
        p.est_amplitude = estimate_input_amplitude(norm, p.mean_gain_db);
        int in_band = 0;
        for (const WindowRecord& w : r.windows) {
          if (w.time_us < settle_us) continue;
          ++p.windows;
          in_band += w.spike_count >= cfg.agc.t_lower && w.spike_count < cfg.agc.t_upper;
        }
        p.in_band_fraction = p.windows ? static_cast<double>(in_band) / p.windows : 0.0;
      } else {
        p.norm_rate_non_agc = norm;
        p.spike_rate_non_agc_hz = rate;
      }
    }
    out.points.push_back(p);
  }

  if (!out.points.empty()) {
    for (const RatePoint& p : out.points) {
      out.mean_rate_hz += p.spike_rate_hz;
      out.mean_rate_non_agc_hz += p.spike_rate_non_agc_hz;
    }
    out.mean_rate_hz /= static_cast<double>(out.points.size());
    out.mean_rate_non_agc_hz /= static_cast<double>(out.points.size());
    out.compression = out.mean_rate_hz > 0.0 ? out.mean_rate_non_agc_hz / out.mean_rate_hz : 0.0;
  }

  std::vector<std::pair<double, double>> xy;
  for (const RatePoint& p : out.points) {
    if (p.compensable && p.r_ga > 0.0) xy.push_back({std::log(p.amplitude_mV), std::log(p.r_ga)});
  }
  if (xy.size() >= 2) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(xy.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(xy.size()));
    for (std::size_t i = 0; i < xy.size(); ++i) {
      a(static_cast<Eigen::Index>(i), 0) = xy[i].first;
      a(static_cast<Eigen::Index>(i), 1) = 1.0;
      b[static_cast<Eigen::Index>(i)] = xy[i].second;
    }
    out.loglog_slope = a.colPivHouseholderQr().solve(b)[0];
  }
  return out;
}

}  // namespace dascochlea
