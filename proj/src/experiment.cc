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
#include "dascochlea/experiment.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "dascochlea/audio.h"
#include "dascochlea/features.h"

namespace dascochlea {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool amplitude_in(double a, std::span<const double> set) {
  return std::any_of(set.begin(), set.end(), [a](double b) { return std::abs(a - b) < 1e-9; });
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(10);
  return os;
}

}  // namespace

const char* to_string(AgcMode m) {
  switch (m) {
    case AgcMode::kOn:
      return "on";
    case AgcMode::kOff:
      return "off";
    case AgcMode::kBoth:
      return "both";
  }
  return "?";
}

const char* to_string(ClassifierKind c) {
  switch (c) {
    case ClassifierKind::kLr:
      return "lr";
    case ClassifierKind::kDnn:
      return "dnn";
    case ClassifierKind::kBoth:
      return "both";
  }
  return "?";
}

AgcMode parse_agc_mode(const std::string& s) {
  if (s == "on") return AgcMode::kOn;
  if (s == "off") return AgcMode::kOff;
  if (s == "both") return AgcMode::kBoth;
  throw InvalidArgument("agc mode must be on, off or both: " + s);
}

ClassifierKind parse_classifier(const std::string& s) {
  if (s == "lr") return ClassifierKind::kLr;
  if (s == "dnn") return ClassifierKind::kDnn;
  if (s == "both") return ClassifierKind::kBoth;
  throw InvalidArgument("classifier must be lr, dnn or both: " + s);
}

void ExperimentSpec::validate() const {
  auto check = [](const std::vector<double>& amps, const char* what) {
    if (amps.empty()) throw InvalidArgument(std::string(what) + " must not be empty");
    for (double a : amps) {
      if (!(a > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
    }
  };
  check(train_amplitudes_mV, "train_amplitudes_mV");
  check(test_amplitudes_mV, "test_amplitudes_mV");
  if (seeds.empty()) throw InvalidArgument("seeds must not be empty");
  if (frame_ms <= 0) throw InvalidArgument("frame_ms must be positive");
  if (const auto* syn = std::get_if<SyntheticCorpus>(&corpus)) syn->spec.validate();
}

FeatureSet FeatureSet::subset(std::span<const double> amplitudes) const {
  std::vector<Eigen::Index> rows_kept;
  for (Eigen::Index i = 0; i < rows(); ++i) {
    if (amplitude_in(amplitude_mV[static_cast<std::size_t>(i)], amplitudes)) rows_kept.push_back(i);
  }
  FeatureSet out;
  out.agc = agc;
  out.x = select_rows(x, rows_kept);
  out.labels.resize(static_cast<Eigen::Index>(rows_kept.size()));
  for (std::size_t j = 0; j < rows_kept.size(); ++j) {
    out.labels[static_cast<Eigen::Index>(j)] = labels[rows_kept[j]];
    out.amplitude_mV.push_back(amplitude_mV[static_cast<std::size_t>(rows_kept[j])]);
    out.recording_id.push_back(recording_id[static_cast<std::size_t>(rows_kept[j])]);
  }
  return out;
}

FeatureSet extract_features(std::span<const RecordingSpec> recordings,
                            std::span<const double> amplitudes_mV, bool agc,
                            const SimulationConfig& cfg, int frame_ms,
                            const ProgressFn& progress) {
  const double fs = cfg.filterbank.sample_rate_hz;
  FrameOptions fopts;
  fopts.frame_len_us = static_cast<TimestampUs>(frame_ms) * 1000;
  fopts.active_channels = cfg.filterbank.active_channels;
  fopts.agc = agc;
  SimulateOptions sopts;
  sopts.agc_on = agc;
  sopts.record_windows = false;

  std::vector<FrameFeature> frames;
  FeatureSet out;
  out.agc = agc;
  std::vector<int> labels;
  std::size_t done = 0;
  for (const RecordingSpec& rec : recordings) {
    const std::vector<double> audio = render(rec, fs);
    for (double amp : amplitudes_mV) {
      const std::vector<double> x = normalize_rms(audio, amp);
      const SimulationResult sim = simulate(x, cfg, sopts);
      for (FrameFeature& f : frame_stream(sim.events, &sim.gain_trace, sim.duration_us, fopts)) {
        frames.push_back(f);
        labels.push_back(static_cast<int>(rec.label));
        out.amplitude_mV.push_back(amp);
        out.recording_id.push_back(rec.id);
      }
    }
    if (progress && (++done % 20 == 0 || done == recordings.size())) {
      progress("features (agc " + std::string(agc ? "on" : "off") + "): " +
               std::to_string(done) + "/" + std::to_string(recordings.size()) + " recordings");
    }
  }
  out.x = stack_features(frames);
  out.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  return out;
}

Corpus load_corpus(const ExperimentSpec& spec) {
  if (const auto* syn = std::get_if<SyntheticCorpus>(&spec.corpus)) {
    return synth_corpus(syn->spec, syn->seed);
  }
  return scan_corpus_dir(std::get<std::filesystem::path>(spec.corpus));
}

std::string condition_label(double amplitude_mV) {
  std::ostringstream os;
  os << amplitude_mV << "mV";
  return os.str();
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const SimulationConfig& cfg,
                                const ProgressFn& progress, FeatureCache* cache) {
  spec.validate();
  cfg.validate();
  const Corpus corpus = load_corpus(spec);
  FeatureCache local;
  FeatureCache& fc = cache ? *cache : local;

  std::vector<bool> modes;
  if (spec.agc != AgcMode::kOff) modes.push_back(true);
  if (spec.agc != AgcMode::kOn) modes.push_back(false);
  std::vector<std::string> classifiers;
  if (spec.classifier != ClassifierKind::kDnn) classifiers.push_back("lr");
  if (spec.classifier != ClassifierKind::kLr) classifiers.push_back("dnn");

  std::vector<std::pair<std::string, std::vector<double>>> conditions;
  for (double a : spec.train_amplitudes_mV) conditions.push_back({condition_label(a), {a}});
  if (spec.include_all) conditions.push_back({"all", spec.train_amplitudes_mV});

  ExperimentReport report;
  report.test_amplitudes_mV = spec.test_amplitudes_mV;
  for (bool agc : modes) {
    auto& train_slot = agc ? fc.train_agc : fc.train_non;
    auto& test_slot = agc ? fc.test_agc : fc.test_non;
    if (!train_slot) {
      train_slot = extract_features(corpus.train, spec.train_amplitudes_mV, agc, cfg,
                                    spec.frame_ms, progress);
    }
    if (!test_slot) {
      test_slot = extract_features(corpus.test, spec.test_amplitudes_mV, agc, cfg,
                                   spec.frame_ms, progress);
    }
    const FeatureSet test_all = test_slot->subset(spec.test_amplitudes_mV);

    for (const auto& [cond, amps] : conditions) {
      const FeatureSet train = train_slot->subset(amps);
      for (const std::string& clf : classifiers) {
        std::optional<LogisticRegression<double>> lr_model;
        std::string lr_error;
        for (std::uint64_t seed : spec.seeds) {
          if (progress) {
            progress("train " + cond + " agc=" + (agc ? "on" : "off") + " " + clf +
                     " seed " + std::to_string(seed));
          }
          std::optional<AccuracyReport> acc;
          std::string status = "ok";
          try {
            const FeatureNormalizer norm = FeatureNormalizer::fit(train.x);
            const Eigen::MatrixXd xtr = norm.transform(train.x);
            const Eigen::MatrixXd xte = norm.transform(test_all.x);
            if (clf == "lr") {
              // Training is deterministic, so one fit serves every seed.
              if (!lr_model && lr_error.empty()) {
                try {
                  lr_model = lr_train<double>(xtr, train.labels, spec.lr);
                } catch (const std::exception& e) {
                  lr_error = e.what();
                }
              }
              if (!lr_model) throw std::runtime_error(lr_error);
              acc = evaluate(*lr_model, xte, test_all.labels, test_all.amplitude_mV);
            } else {
              TrainConfig tc = spec.dnn;
              tc.seed = seed;
              const auto res = dnn_train<float>(xtr, train.labels, tc);
              acc = evaluate(res.model, xte, test_all.labels, test_all.amplitude_mV);
            }
          } catch (const std::exception& e) {
            status = std::string("failed: ") + e.what();
            ++report.failed_cells;
          }
          for (double ta : spec.test_amplitudes_mV) {
            AccuracyCell cell{cond, agc, clf, seed, ta, kNaN, 0, status};
            if (acc) {
              auto it = acc->per_amplitude.find(ta);
              if (it == acc->per_amplitude.end()) {
                cell.status = "no_frames";
              } else {
                cell.accuracy = it->second;
                cell.frames = static_cast<std::size_t>(std::count(
                    test_all.amplitude_mV.begin(), test_all.amplitude_mV.end(), ta));
              }
            }
            report.cells.push_back(cell);
          }
        }
      }
    }
  }
  summarize(report);
  return report;
}

void summarize(ExperimentReport& report) {
  using Key = std::tuple<std::string, bool, std::string>;
  std::vector<Key> order;
  std::map<Key, std::map<double, std::pair<double, int>>> sums;
  std::map<Key, std::map<std::uint64_t, std::pair<double, int>>> per_seed;
  for (const AccuracyCell& c : report.cells) {
    const Key k{c.train_condition, c.agc, c.classifier};
    if (!sums.count(k)) order.push_back(k);
    auto& s = sums[k][c.test_amplitude_mV];
    auto& p = per_seed[k][c.seed];
    if (std::isfinite(c.accuracy)) {
      s.first += c.accuracy;
      ++s.second;
      p.first += c.accuracy;
      ++p.second;
    }
  }
  report.mean_table.clear();
  std::map<Key, double> row_mean;
  for (const Key& k : order) {
    MeanAccuracyRow row{std::get<0>(k), std::get<1>(k), std::get<2>(k), {}, 0.0};
    double total = 0.0;
    int n = 0;
    for (double ta : report.test_amplitudes_mV) {
      const auto it = sums[k].find(ta);
      const double v = (it != sums[k].end() && it->second.second > 0)
                           ? it->second.first / it->second.second
                           : kNaN;
      row.per_amplitude.push_back(v);
      if (std::isfinite(v)) {
        total += v;
        ++n;
      }
    }
    row.mean = n ? total / n : kNaN;
    row_mean[k] = row.mean;
    report.mean_table.push_back(row);
  }

  report.relative_error.clear();
  for (const Key& k : order) {
    if (!std::get<1>(k)) continue;
    const Key non{std::get<0>(k), false, std::get<2>(k)};
    if (!row_mean.count(non)) continue;
    RelativeErrorRow r{std::get<0>(k), std::get<2>(k), row_mean[k], row_mean[non], kNaN, kNaN};
    if (std::isfinite(r.mean_acc_agc) && std::isfinite(r.mean_acc_non_agc) &&
        r.mean_acc_non_agc < 1.0) {
      r.relative_error_decrease = relative_error_decrease(r.mean_acc_agc, r.mean_acc_non_agc);
    }
    double total = 0.0;
    int n = 0;
    for (const auto& [seed, on] : per_seed[k]) {
      const auto it = per_seed[non].find(seed);
      if (it == per_seed[non].end() || on.second == 0 || it->second.second == 0) continue;
      const double a = on.first / on.second;
      const double b = it->second.first / it->second.second;
      if (b >= 1.0) continue;
      total += relative_error_decrease(a, b);
      ++n;
    }
    r.mean_seed_decrease = n ? total / n : kNaN;
    report.relative_error.push_back(r);
  }
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto os = open_csv(dir / "accuracy_cells.csv");
    os << "train_condition,agc,classifier,seed,test_amplitude_mV,accuracy,frames,status\n";
    for (const AccuracyCell& c : report.cells) {
      os << c.train_condition << ',' << (c.agc ? "on" : "off") << ',' << c.classifier << ','
         << c.seed << ',' << c.test_amplitude_mV << ',' << c.accuracy << ',' << c.frames
         << ",\"" << c.status << "\"\n";
    }
  }
  {
    auto os = open_csv(dir / "mean_accuracy.csv");
    os << "train_condition,agc,classifier";
    for (double a : report.test_amplitudes_mV) os << ",acc_" << a << "mV";
    os << ",mean\n";
    for (const MeanAccuracyRow& r : report.mean_table) {
      os << r.train_condition << ',' << (r.agc ? "on" : "off") << ',' << r.classifier;
      for (double v : r.per_amplitude) os << ',' << v;
      os << ',' << r.mean << '\n';
    }
  }
  {
    auto os = open_csv(dir / "relative_error.csv");
    os << "train_condition,classifier,mean_acc_agc,mean_acc_non_agc,"
          "relative_error_decrease_pct,mean_seed_decrease_pct\n";
    for (const RelativeErrorRow& r : report.relative_error) {
      os << r.train_condition << ',' << r.classifier << ',' << r.mean_acc_agc << ','
         << r.mean_acc_non_agc << ',' << r.relative_error_decrease << ','
         << r.mean_seed_decrease << '\n';
    }
  }
}

}  // namespace dascochlea
