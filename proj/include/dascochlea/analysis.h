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
#ifndef DASCOCHLEA_ANALYSIS_H_
#define DASCOCHLEA_ANALYSIS_H_

#include <span>
#include <vector>

#include "dascochlea/simulate.h"

namespace dascochlea {

struct RateAnalysisOptions {
  double settle_s = 1.0;
  double measure_s = 2.0;
};

struct RatePoint {
  double amplitude_mV = 0.0;  // input RMS
  // ON events per period of the input frequency, AGC on.
  double norm_rate = 0.0;
  double mean_gain_index = 0.0;
  double mean_gain_db = 0.0;
  double r_ga = 0.0;
  double est_amplitude = 0.0;
  double norm_rate_non_agc = 0.0;
  // All events per second after settling.
  double spike_rate_hz = 0.0;
  double spike_rate_non_agc_hz = 0.0;
  // Share of post-settling windows with count in [t_lower, t_upper).
  double in_band_fraction = 0.0;
  int windows = 0;
  bool compensable = false;
};

struct RateAnalysis {
  int channel = 0;
  double freq_hz = 0.0;
  std::vector<RatePoint> points;
  double mean_rate_hz = 0.0;
  double mean_rate_non_agc_hz = 0.0;
  // Non-AGC mean rate over AGC mean rate.
  double compression = 0.0;
  // Least-squares slope of log r_ga against log amplitude over the
  // compensable points.
  double loglog_slope = 0.0;
};

// Drives a single channel with a sine of each RMS amplitude (100 mV = full
// scale) with and without AGC.
RateAnalysis rate_analysis(int channel, double freq_hz, std::span<const double> amplitudes_mV,
                           const SimulationConfig& cfg, const RateAnalysisOptions& opts = {});

// Window count a clean sine of the given filter-output peak produces in
// steady state: lattice levels crossed per period times n_periods.
int steady_window_count(double output_peak, const AdmParams& adm, const AgcParams& agc);

// True when some gain setting puts the steady window count of a sine at
// this RMS amplitude inside [t_lower, t_upper).
bool is_compensable(int channel, double freq_hz, double amplitude_mV,
                    const SimulationConfig& cfg);

// `count` amplitudes spaced evenly in dB from lo_mV to hi_mV.
std::vector<double> log_sweep(double lo_mV, double hi_mV, int count);

// Time-weighted mean of the gain in dB over [start, end).
double mean_gain_db(const GainTrace& trace, int channel, TimestampUs start_us,
                    TimestampUs end_us, std::span<const double> gain_table_db);

}  // namespace dascochlea

#endif  // DASCOCHLEA_ANALYSIS_H_
