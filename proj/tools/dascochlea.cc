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
// Command-line front end: simulate, features, train, evaluate, experiment,
// rate-analysis and freq-response.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dascochlea/analysis.h"
#include "dascochlea/audio.h"
#include "dascochlea/config.h"
#include "dascochlea/corpus.h"
#include "dascochlea/event_file.h"
#include "dascochlea/experiment.h"
#include "dascochlea/serialize.h"

namespace fs = std::filesystem;
using namespace dascochlea;

namespace {

struct Common {
  std::string config_path;
  std::string agc;
  std::string channels;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool with_agc, bool with_seed) {
  cmd->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output path")->capture_default_str();
  cmd->add_option("--channels", c.channels, "active channels, e.g. 56hz-4khz or 12-47");
  if (with_agc) {
    cmd->add_option("--agc", c.agc, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
  }
  if (with_seed) cmd->add_option("--seed", c.seed, "random seed");
}

AppConfig resolve(const Common& c) {
  AppConfig cfg = c.config_path.empty() ? AppConfig{} : load_config(c.config_path);
  if (!c.channels.empty()) {
    cfg.sim.filterbank.active_channels = parse_channel_range(c.channels, cfg.sim.filterbank);
  }
  if (!c.agc.empty()) cfg.experiment.agc = parse_agc_mode(c.agc);
  cfg.sim.validate();
  return cfg;
}

void log_line(const std::string& msg) { std::cerr << msg << '\n'; }

std::vector<bool> modes_of(AgcMode m) {
  if (m == AgcMode::kOn) return {true};
  if (m == AgcMode::kOff) return {false};
  return {true, false};
}

int cmd_simulate(const Common& c, const std::string& input, const std::string& synth,
                 double duration_s, std::optional<double> amplitude, std::optional<int> trace_ch) {
  const AppConfig cfg = resolve(c);
  const double fs = cfg.sim.filterbank.sample_rate_hz;
  std::vector<double> audio;
  std::string source_id;
  std::optional<Label> label;
  if (!input.empty()) {
    audio = load_audio(input, fs);
    source_id = input;
  } else {
    const std::uint64_t seed = c.seed.value_or(0);
    if (synth == "speech") {
      audio = synth_speech_like(duration_s, fs, seed);
      label = Label::kSpeech;
    } else {
      const std::map<std::string, SourceKind> kinds = {{"band_noise", SourceKind::kBandNoise},
                                                       {"modulated_noise", SourceKind::kModulatedNoise},
                                                       {"tones", SourceKind::kTones},
                                                       {"chirps", SourceKind::kChirps},
                                                       {"music_like", SourceKind::kMusicLike}};
      audio = synth_noise_like(kinds.at(synth), duration_s, fs, seed);
      label = Label::kNoise;
    }
    source_id = synth + ":" + std::to_string(seed);
  }
  if (amplitude) audio = normalize_rms(audio, *amplitude);

  fs::create_directories(c.out);
  for (bool agc : modes_of(cfg.experiment.agc)) {
    SimulateOptions so;
    so.agc_on = agc;
    so.trace_channel = trace_ch;
    const auto t0 = std::chrono::steady_clock::now();
    const SimulationResult r = simulate(audio, cfg.sim, so);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string tag = agc ? "agc" : "non_agc";
    EventFileHeader h;
    h.sample_rate_hz = fs;
    h.agc = agc;
    h.delta = cfg.sim.adm.delta;
    h.gain_table_db = cfg.sim.filterbank.gain_table_db;
    h.amplitude_mV = amplitude;
    h.label = label;
    h.source_id = source_id;
    write_event_file(fs::path(c.out) / ("events_" + tag + ".dase"), h, r.events);
    write_gain_trace_csv(fs::path(c.out) / ("gain_trace_" + tag + ".csv"), r.gain_trace);
    write_windows_csv(fs::path(c.out) / ("windows_" + tag + ".csv"), r.windows);
    if (trace_ch) {
      std::ofstream os(fs::path(c.out) / ("analog_" + tag + ".csv"));
      os << "sample,value\n";
      for (std::size_t i = 0; i < r.analog_trace.size(); ++i) os << i << ',' << r.analog_trace[i] << '\n';
    }
    std::printf("%s: %zu events, %zu windows, %llu dropped requests, %.2f s audio in %.2f s\n",
                tag.c_str(), r.events.size(), r.windows.size(),
                static_cast<unsigned long long>(r.dropped_requests),
                static_cast<double>(audio.size()) / fs, secs);
  }
  return 0;
}

int cmd_features(const Common& c) {
  AppConfig cfg = resolve(c);
  if (c.seed) {
    if (auto* syn = std::get_if<SyntheticCorpus>(&cfg.experiment.corpus)) syn->seed = *c.seed;
  }
  const Corpus corpus = load_corpus(cfg.experiment);
  fs::create_directories(c.out);
  for (bool agc : modes_of(cfg.experiment.agc)) {
    const std::string tag = agc ? "agc" : "non_agc";
    const FeatureSet train = extract_features(corpus.train, cfg.experiment.train_amplitudes_mV, agc,
                                              cfg.sim, cfg.experiment.frame_ms, log_line);
    write_features_csv(fs::path(c.out) / ("features_train_" + tag + ".csv"), train);
    const FeatureSet test = extract_features(corpus.test, cfg.experiment.test_amplitudes_mV, agc,
                                             cfg.sim, cfg.experiment.frame_ms, log_line);
    write_features_csv(fs::path(c.out) / ("features_test_" + tag + ".csv"), test);
    std::printf("%s: %lld train frames, %lld test frames\n", tag.c_str(),
                static_cast<long long>(train.rows()), static_cast<long long>(test.rows()));
  }
  return 0;
}

int cmd_train(const Common& c, const std::string& features, const std::string& classifier,
              std::vector<double> amplitudes) {
  const AppConfig cfg = resolve(c);
  FeatureSet set = read_features_csv(features);
  if (!amplitudes.empty()) set = set.subset(amplitudes);
  Checkpoint ck;
  ck.agc = set.agc;
  ck.seed = c.seed.value_or(0);
  ck.config_hash = config_hash(cfg);
  ck.normalizer = FeatureNormalizer::fit(set.x);
  const Eigen::MatrixXd x = ck.normalizer.transform(set.x);
  if (classifier == "lr") {
    LrTrainReport rep;
    ck.model = lr_train<double>(x, set.labels, cfg.experiment.lr, &rep);
    std::printf("lr: %d iterations, loss %.6f, gradient norm %.3g\n", rep.iterations,
                rep.final_loss, rep.grad_norm);
  } else {
    TrainConfig tc = cfg.experiment.dnn;
    tc.seed = ck.seed;
    const auto res = dnn_train<float>(x, set.labels, tc);
    ck.model = res.model;
    std::printf("dnn: best validation accuracy %.4f at epoch %d\n", res.best_val_accuracy,
                res.best_epoch);
  }
  save_checkpoint(c.out, ck);
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& model, const std::string& features) {
  const Checkpoint ck = load_checkpoint(model);
  const FeatureSet set = read_features_csv(features);
  const Eigen::VectorXi pred = ck.predict(set.x);
  const AccuracyReport rep =
      evaluate(std::span<const int>(pred.data(), static_cast<std::size_t>(pred.size())),
               std::span<const int>(set.labels.data(), static_cast<std::size_t>(set.labels.size())),
               set.amplitude_mV);
  std::ofstream os(c.out);
  if (!os) throw std::runtime_error("cannot write " + c.out);
  os << "amplitude_mV,accuracy\n";
  for (const auto& [amp, acc] : rep.per_amplitude) {
    os << amp << ',' << acc << '\n';
    std::printf("%8.2f mV  %.4f\n", amp, acc);
  }
  std::printf("overall %.4f, mean across amplitudes %.4f (%zu frames)\n", rep.overall,
              rep.mean_across_amplitudes, rep.count);
  return 0;
}

int cmd_experiment(const Common& c, const std::string& classifier) {
  AppConfig cfg = resolve(c);
  if (c.seed) cfg.experiment.seeds = {*c.seed};
  if (!classifier.empty()) cfg.experiment.classifier = parse_classifier(classifier);
  const ExperimentReport rep = run_experiment(cfg.experiment, cfg.sim, log_line);
  write_report(rep, c.out);
  for (const RelativeErrorRow& r : rep.relative_error) {
    std::printf("%-8s %-4s agc %.4f  non-agc %.4f  relative error decrease %.1f%%\n",
                r.train_condition.c_str(), r.classifier.c_str(), r.mean_acc_agc,
                r.mean_acc_non_agc, r.relative_error_decrease);
  }
  if (rep.failed_cells) std::printf("%d cells failed; see accuracy_cells.csv\n", rep.failed_cells);
  return 0;
}

int cmd_rate(const Common& c, std::optional<int> channel, std::optional<double> freq) {
  const AppConfig cfg = resolve(c);
  const int ch = channel.value_or(cfg.rate.channel);
  const double f = freq ? *freq : cfg.rate.freq_hz ? *cfg.rate.freq_hz
                                                   : channel_center_freq(ch, cfg.sim.filterbank);
  const auto amps = log_sweep(cfg.rate.lo_mV, cfg.rate.hi_mV, cfg.rate.count);
  const RateAnalysis ra = rate_analysis(ch, f, amps, cfg.sim, cfg.rate.timing);
  write_rate_analysis_csv(c.out, ra);
  std::printf("channel %d at %.2f Hz: mean rate %.1f/s with AGC, %.1f/s without (%.2fx), "
              "log-log slope of r_ga %.3f\n",
              ch, f, ra.mean_rate_hz, ra.mean_rate_non_agc_hz, ra.compression, ra.loglog_slope);
  return 0;
}

int cmd_freq_response(const Common& c, std::optional<int> channel, std::optional<int> gi) {
  const AppConfig cfg = resolve(c);
  const auto& fr = cfg.freq_response;
  const auto freqs = log_sweep(fr.f_lo_hz, fr.f_hi_hz, fr.f_count);
  std::vector<double> amps;
  for (double a : fr.amplitudes_mV) amps.push_back(a / kFullScaleMilliVolts);
  FrequencyResponseOptions opts;
  opts.v_noise = fr.v_noise;
  const GainGrid grid = frequency_response(channel.value_or(fr.channel), gi.value_or(fr.gain_index),
                                           amps, freqs, cfg.sim.filterbank, opts);
  write_freq_response_csv(c.out, grid);
  std::printf("wrote %zu points to %s\n", grid.values.size(), c.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiking cochlea simulator with per-channel automatic gain control"};
  app.require_subcommand(1);

  Common c_sim, c_feat, c_train, c_eval, c_exp, c_rate, c_freq;

  auto* sim = app.add_subcommand("simulate", "run one recording through the cochlea");
  add_common(sim, c_sim, true, true);
  std::string input, synth = "speech";
  double duration_s = 5.0;
  std::optional<double> amplitude;
  std::optional<int> trace_ch;
  sim->add_option("--input", input, "WAV file")->check(CLI::ExistingFile);
  sim->add_option("--synth", synth, "synthetic source when no input is given")
      ->check(CLI::IsMember({"speech", "band_noise", "modulated_noise", "tones", "chirps", "music_like"}))
      ->capture_default_str();
  sim->add_option("--duration", duration_s, "synthetic duration in seconds")->capture_default_str();
  sim->add_option("--amplitude", amplitude, "normalize to this RMS amplitude in mV");
  sim->add_option("--trace-channel", trace_ch, "record this channel's filter output");

  auto* feat = app.add_subcommand("features", "simulate the corpus and write feature CSVs");
  add_common(feat, c_feat, true, true);

  auto* train = app.add_subcommand("train", "train a classifier on a feature CSV");
  add_common(train, c_train, false, true);
  std::string train_features, classifier = "lr";
  std::vector<double> train_amps;
  train->add_option("--features", train_features, "feature CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--classifier", classifier, "lr or dnn")
      ->check(CLI::IsMember({"lr", "dnn"}))
      ->capture_default_str();
  train->add_option("--amplitudes", train_amps, "train only on these amplitudes (mV)");

  auto* eval = app.add_subcommand("evaluate", "score a trained model on a feature CSV");
  add_common(eval, c_eval, false, false);
  std::string model_path, eval_features;
  eval->add_option("--model", model_path, "model checkpoint")->required()->check(CLI::ExistingFile);
  eval->add_option("--features", eval_features, "feature CSV")->required()->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("experiment", "run the train/test amplitude matrix");
  add_common(exp, c_exp, true, true);
  std::string exp_classifier;
  exp->add_option("--classifier", exp_classifier, "lr, dnn or both")
      ->check(CLI::IsMember({"lr", "dnn", "both"}));

  auto* rate = app.add_subcommand("rate-analysis", "sine amplitude sweep on one channel");
  add_common(rate, c_rate, false, false);
  std::optional<int> rate_ch;
  std::optional<double> rate_freq;
  rate->add_option("--channel", rate_ch, "channel index");
  rate->add_option("--freq", rate_freq, "input frequency in Hz");

  auto* freq = app.add_subcommand("freq-response", "measure one channel's gain over frequency");
  add_common(freq, c_freq, false, false);
  std::optional<int> freq_ch, freq_gi;
  freq->add_option("--channel", freq_ch, "channel index");
  freq->add_option("--gain-index", freq_gi, "gain index 0-11");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return cmd_simulate(c_sim, input, synth, duration_s, amplitude, trace_ch);
    if (*feat) return cmd_features(c_feat);
    if (*train) return cmd_train(c_train, train_features, classifier, train_amps);
    if (*eval) return cmd_evaluate(c_eval, model_path, eval_features);
    if (*exp) return cmd_experiment(c_exp, exp_classifier);
    if (*rate) return cmd_rate(c_rate, rate_ch, rate_freq);
    if (*freq) return cmd_freq_response(c_freq, freq_ch, freq_gi);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
