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
#include "dascochlea/config.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dascochlea {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw InvalidArgument("unknown config key: " + where + "." + k);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_filterbank(const json& j, FilterbankConfig& fb) {
  reject_unknown(j, {"sample_rate_hz", "f_min_hz", "f_max_hz", "q_factor", "active_channels",
                     "gain_table_db", "saturation"},
                 "filterbank");
  read(j, "sample_rate_hz", fb.sample_rate_hz);
  read(j, "f_min_hz", fb.f_min_hz);
  read(j, "f_max_hz", fb.f_max_hz);
  read(j, "q_factor", fb.q_factor);
  read(j, "gain_table_db", fb.gain_table_db);
  if (j.contains("active_channels")) {
    const json& a = j.at("active_channels");
    if (a.is_string()) {
      fb.active_channels = parse_channel_range(a.get<std::string>(), fb);
    } else {
      const auto v = a.get<std::vector<int>>();
      if (v.size() != 2) throw InvalidArgument("active_channels must be [first, last]");
      fb.active_channels = {v[0], v[1]};
    }
  }
  if (j.contains("saturation")) {
    const json& s = j.at("saturation");
    reject_unknown(s, {"enabled", "knee"}, "filterbank.saturation");
    read(s, "enabled", fb.saturation.enabled);
    read(s, "knee", fb.saturation.knee);
  }
}

void parse_adm(const json& j, AdmParams& adm) {
  reject_unknown(j, {"delta", "max_events_per_sample", "reference_offset"}, "adm");
  read(j, "delta", adm.delta);
  read(j, "max_events_per_sample", adm.max_events_per_sample);
  read(j, "reference_offset", adm.reference_offset);
}

void parse_agc(const json& j, AgcParams& agc) {
  reject_unknown(j, {"n_periods", "t_lower", "t_upper", "settle_time_us", "queue_capacity",
                     "counted_polarity", "initial_gain_index"},
                 "agc");
  read(j, "n_periods", agc.n_periods);
  read(j, "t_lower", agc.t_lower);
  read(j, "t_upper", agc.t_upper);
  read(j, "settle_time_us", agc.settle_time_us);
  read(j, "queue_capacity", agc.queue_capacity);
  read(j, "initial_gain_index", agc.initial_gain_index);
  if (j.contains("counted_polarity")) {
    const auto s = j.at("counted_polarity").get<std::string>();
    if (s == "on") {
      agc.counted_polarity = CountedPolarity::kOnOnly;
    } else if (s == "both") {
      agc.counted_polarity = CountedPolarity::kBoth;
    } else {
      throw InvalidArgument("agc.counted_polarity must be \"on\" or \"both\"");
    }
  }
}

void parse_experiment(const json& j, ExperimentSpec& e) {
  reject_unknown(j, {"corpus", "train_amplitudes_mV", "test_amplitudes_mV", "include_all", "agc",
                     "classifier", "seeds", "frame_ms", "output_dir", "dnn", "lr"},
                 "experiment");
  if (j.contains("corpus")) {
    const json& c = j.at("corpus");
    reject_unknown(c, {"path", "synthetic"}, "experiment.corpus");
    if (c.contains("path") && c.contains("synthetic")) {
      throw InvalidArgument("experiment.corpus takes either path or synthetic");
    }
    if (c.contains("path")) {
      e.corpus = std::filesystem::path(c.at("path").get<std::string>());
    } else if (c.contains("synthetic")) {
      const json& s = c.at("synthetic");
      reject_unknown(s, {"train_minutes", "test_minutes", "clip_min_s", "clip_max_s", "seed"},
                     "experiment.corpus.synthetic");
      SyntheticCorpus sc;
      read(s, "train_minutes", sc.spec.train_minutes);
      read(s, "test_minutes", sc.spec.test_minutes);
      read(s, "clip_min_s", sc.spec.clip_min_s);
      read(s, "clip_max_s", sc.spec.clip_max_s);
      read(s, "seed", sc.seed);
      e.corpus = sc;
    }
  }
  read(j, "train_amplitudes_mV", e.train_amplitudes_mV);
  read(j, "test_amplitudes_mV", e.test_amplitudes_mV);
  read(j, "include_all", e.include_all);
  if (j.contains("agc")) e.agc = parse_agc_mode(j.at("agc").get<std::string>());
  if (j.contains("classifier")) e.classifier = parse_classifier(j.at("classifier").get<std::string>());
  read(j, "seeds", e.seeds);
  read(j, "frame_ms", e.frame_ms);
  if (j.contains("output_dir")) e.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("dnn")) {
    const json& d = j.at("dnn");
    reject_unknown(d, {"epochs", "batch_size", "learning_rate", "dropout", "val_fraction"},
                   "experiment.dnn");
    read(d, "epochs", e.dnn.epochs);
    read(d, "batch_size", e.dnn.batch_size);
    read(d, "learning_rate", e.dnn.learning_rate);
    read(d, "dropout", e.dnn.dropout);
    read(d, "val_fraction", e.dnn.val_fraction);
  }
  if (j.contains("lr")) {
    const json& l = j.at("lr");
    reject_unknown(l, {"l2", "grad_tol", "max_iterations"}, "experiment.lr");
    read(l, "l2", e.lr.l2);
    read(l, "grad_tol", e.lr.grad_tol);
    read(l, "max_iterations", e.lr.max_iterations);
  }
}

void parse_rate(const json& j, RateSweepConfig& r) {
  reject_unknown(j, {"channel", "freq_hz", "lo_mV", "hi_mV", "count", "settle_s", "measure_s"},
                 "rate_analysis");
  read(j, "channel", r.channel);
  if (j.contains("freq_hz")) r.freq_hz = j.at("freq_hz").get<double>();
  read(j, "lo_mV", r.lo_mV);
  read(j, "hi_mV", r.hi_mV);
  read(j, "count", r.count);
  read(j, "settle_s", r.timing.settle_s);
  read(j, "measure_s", r.timing.measure_s);
}

void parse_freq(const json& j, FreqResponseConfig& f) {
  reject_unknown(j, {"channel", "gain_index", "amplitudes_mV", "f_lo_hz", "f_hi_hz", "f_count",
                     "v_noise"},
                 "freq_response");
  read(j, "channel", f.channel);
  read(j, "gain_index", f.gain_index);
  read(j, "amplitudes_mV", f.amplitudes_mV);
  read(j, "f_lo_hz", f.f_lo_hz);
  read(j, "f_hi_hz", f.f_hi_hz);
  read(j, "f_count", f.f_count);
  read(j, "v_noise", f.v_noise);
}

json to_json(const AppConfig& c) {
  const auto& fb = c.sim.filterbank;
  const auto& e = c.experiment;
  json corpus;
  if (const auto* syn = std::get_if<SyntheticCorpus>(&e.corpus)) {
    corpus["synthetic"] = {{"train_minutes", syn->spec.train_minutes},
                           {"test_minutes", syn->spec.test_minutes},
                           {"clip_min_s", syn->spec.clip_min_s},
                           {"clip_max_s", syn->spec.clip_max_s},
                           {"seed", syn->seed}};
  } else {
    corpus["path"] = std::get<std::filesystem::path>(e.corpus).generic_string();
  }
  json rate = {{"channel", c.rate.channel},
               {"lo_mV", c.rate.lo_mV},
               {"hi_mV", c.rate.hi_mV},
               {"count", c.rate.count},
               {"settle_s", c.rate.timing.settle_s},
               {"measure_s", c.rate.timing.measure_s}};
  if (c.rate.freq_hz) rate["freq_hz"] = *c.rate.freq_hz;
  return {
      {"filterbank",
       {{"sample_rate_hz", fb.sample_rate_hz},
        {"f_min_hz", fb.f_min_hz},
        {"f_max_hz", fb.f_max_hz},
        {"q_factor", fb.q_factor},
        {"active_channels", {fb.active_channels.first, fb.active_channels.last}},
        {"gain_table_db", fb.gain_table_db},
        {"saturation", {{"enabled", fb.saturation.enabled}, {"knee", fb.saturation.knee}}}}},
      {"adm",
       {{"delta", c.sim.adm.delta},
        {"max_events_per_sample", c.sim.adm.max_events_per_sample},
        {"reference_offset", c.sim.adm.reference_offset}}},
      {"agc",
       {{"n_periods", c.sim.agc.n_periods},
        {"t_lower", c.sim.agc.t_lower},
        {"t_upper", c.sim.agc.t_upper},
        {"settle_time_us", c.sim.agc.settle_time_us},
        {"queue_capacity", c.sim.agc.queue_capacity},
        {"counted_polarity",
         c.sim.agc.counted_polarity == CountedPolarity::kOnOnly ? "on" : "both"},
        {"initial_gain_index", c.sim.agc.initial_gain_index}}},
      {"experiment",
       {{"corpus", corpus},
        {"train_amplitudes_mV", e.train_amplitudes_mV},
        {"test_amplitudes_mV", e.test_amplitudes_mV},
        {"include_all", e.include_all},
        {"agc", to_string(e.agc)},
        {"classifier", to_string(e.classifier)},
        {"seeds", e.seeds},
        {"frame_ms", e.frame_ms},
        {"output_dir", e.output_dir.generic_string()},
        {"dnn",
         {{"epochs", e.dnn.epochs},
          {"batch_size", e.dnn.batch_size},
          {"learning_rate", e.dnn.learning_rate},
          {"dropout", e.dnn.dropout},
          {"val_fraction", e.dnn.val_fraction}}},
        {"lr", {{"l2", e.lr.l2}, {"grad_tol", e.lr.grad_tol}, {"max_iterations", e.lr.max_iterations}}}}},
      {"rate_analysis", rate},
      {"freq_response",
       {{"channel", c.freq_response.channel},
        {"gain_index", c.freq_response.gain_index},
        {"amplitudes_mV", c.freq_response.amplitudes_mV},
        {"f_lo_hz", c.freq_response.f_lo_hz},
        {"f_hi_hz", c.freq_response.f_hi_hz},
        {"f_count", c.freq_response.f_count},
        {"v_noise", c.freq_response.v_noise}}}};
}

double parse_frequency(const std::string& s) {
  static const std::regex re(R"(^\s*([0-9]*\.?[0-9]+)\s*(hz|khz)\s*$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw InvalidArgument("bad frequency: " + s);
  std::string unit = m[2];
  std::transform(unit.begin(), unit.end(), unit.begin(), [](unsigned char c) { return std::tolower(c); });
  return std::stod(m[1]) * (unit == "khz" ? 1000.0 : 1.0);
}

int nearest_channel(double f, const FilterbankConfig& cfg) {
  int best = 0;
  double best_d = 1e300;
  for (int ch = 0; ch < cfg.num_channels; ++ch) {
    const double d = std::abs(std::log(channel_center_freq(ch, cfg) / f));
    if (d < best_d) {
      best_d = d;
      best = ch;
    }
  }
  return best;
}

}  // namespace

ChannelRange parse_channel_range(const std::string& text, const FilterbankConfig& cfg) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "56hz-4khz") return ChannelRange{12, 47};
  static const std::regex idx(R"(^\s*(\d+)\s*-\s*(\d+)\s*$)");
  std::smatch m;
  ChannelRange r;
  if (std::regex_match(s, m, idx)) {
    r = {std::stoi(m[1]), std::stoi(m[2])};
  } else {
    const auto dash = s.find('-');
    if (dash == std::string::npos) throw InvalidArgument("bad channel range: " + text);
    const int a = nearest_channel(parse_frequency(s.substr(0, dash)), cfg);
    const int b = nearest_channel(parse_frequency(s.substr(dash + 1)), cfg);
    r = {std::min(a, b), std::max(a, b)};
  }
  if (r.first < 0 || r.last >= cfg.num_channels || r.first > r.last) {
    throw InvalidArgument("channel range out of bounds: " + text);
  }
  return r;
}

AppConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"filterbank", "adm", "agc", "experiment", "rate_analysis", "freq_response"},
                 "config");
  AppConfig c;
  try {
    if (j.contains("filterbank")) parse_filterbank(j.at("filterbank"), c.sim.filterbank);
    if (j.contains("adm")) parse_adm(j.at("adm"), c.sim.adm);
    if (j.contains("agc")) parse_agc(j.at("agc"), c.sim.agc);
    if (j.contains("experiment")) parse_experiment(j.at("experiment"), c.experiment);
    if (j.contains("rate_analysis")) parse_rate(j.at("rate_analysis"), c.rate);
    if (j.contains("freq_response")) parse_freq(j.at("freq_response"), c.freq_response);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  c.sim.validate();
  c.experiment.validate();
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const AppConfig& cfg) { return to_json(cfg).dump(2); }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const AppConfig& cfg) { return fnv1a64(to_json(cfg).dump()); }

}  // namespace dascochlea
