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
#include "dascochlea/serialize.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace dascochlea {
namespace {

using nlohmann::json;

constexpr int kCheckpointVersion = 1;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(17);
  return os;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

void write_features_csv(const std::filesystem::path& path, const FeatureSet& set) {
  auto os = open_out(path);
  for (Eigen::Index c = 0; c < set.x.cols(); ++c) os << 'f' << c << ',';
  os << "label,recording_id,amplitude_mV,agc\n";
  for (Eigen::Index r = 0; r < set.rows(); ++r) {
    for (Eigen::Index c = 0; c < set.x.cols(); ++c) os << set.x(r, c) << ',';
    os << set.labels[r] << ",\"" << set.recording_id[static_cast<std::size_t>(r)] << "\","
       << set.amplitude_mV[static_cast<std::size_t>(r)] << ',' << (set.agc ? 1 : 0) << '\n';
  }
}

FeatureSet read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty feature file " + path.string());
  const auto header = split_csv_line(line);
  if (header.size() < 5 || header[header.size() - 4] != "label") {
    throw InvalidArgument("not a feature CSV: " + path.string());
  }
  const std::size_t dim = header.size() - 4;
  std::vector<double> values;
  std::vector<int> labels;
  FeatureSet out;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw InvalidArgument("ragged feature row in " + path.string());
    for (std::size_t c = 0; c < dim; ++c) values.push_back(std::stod(cells[c]));
    labels.push_back(std::stoi(cells[dim]));
    out.recording_id.push_back(cells[dim + 1]);
    out.amplitude_mV.push_back(std::stod(cells[dim + 2]));
    const bool agc = std::stoi(cells[dim + 3]) != 0;
    if (!first && agc != out.agc) throw InvalidArgument("mixed AGC modes in " + path.string());
    out.agc = agc;
    first = false;
  }
  const auto rows = static_cast<Eigen::Index>(labels.size());
  out.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, static_cast<Eigen::Index>(dim));
  out.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(), rows);
  return out;
}

void write_gain_trace_csv(const std::filesystem::path& path, const GainTrace& trace) {
  auto os = open_out(path);
  os << "time_us,channel,gain_index\n";
  for (const GainChange& c : trace.changes()) {
    os << c.time_us << ',' << int(c.channel) << ',' << int(c.gain_index) << '\n';
  }
}

void write_windows_csv(const std::filesystem::path& path, std::span<const WindowRecord> windows) {
  auto os = open_out(path);
  os << "time_us,channel,spike_count,decision,gain_index\n";
  for (const WindowRecord& w : windows) {
    os << w.time_us << ',' << int(w.channel) << ',' << int(w.spike_count) << ','
       << to_string(w.decision) << ',' << int(w.gain_index) << '\n';
  }
}

void write_rate_analysis_csv(const std::filesystem::path& path, const RateAnalysis& ra) {
  auto os = open_out(path);
  os << "amplitude_mV,norm_rate,mean_gain_index,mean_gain_db,r_ga,est_amplitude,"
        "norm_rate_non_agc,spike_rate_hz,spike_rate_non_agc_hz,in_band_fraction,windows,"
        "compensable\n";
  for (const RatePoint& p : ra.points) {
    os << p.amplitude_mV << ',' << p.norm_rate << ',' << p.mean_gain_index << ','
       << p.mean_gain_db << ',' << p.r_ga << ',' << p.est_amplitude << ','
       << p.norm_rate_non_agc << ',' << p.spike_rate_hz << ',' << p.spike_rate_non_agc_hz << ','
       << p.in_band_fraction << ',' << p.windows << ',' << (p.compensable ? 1 : 0) << '\n';
  }
}

void write_freq_response_csv(const std::filesystem::path& path, const GainGrid& grid) {
  auto os = open_out(path);
  os << "amplitude_mV,freq_hz,gain_db\n";
  for (std::size_t r = 0; r < grid.amplitudes.size(); ++r) {
    for (std::size_t c = 0; c < grid.freqs_hz.size(); ++c) {
      os << grid.amplitudes[r] * 100.0 << ',' << grid.freqs_hz[c] << ','
         << grid.at(r, c).to_string() << '\n';
    }
  }
}

std::string Checkpoint::kind() const {
  return std::holds_alternative<LogisticRegression<double>>(model) ? "lr" : "dnn";
}

Eigen::VectorXi Checkpoint::predict(const Eigen::MatrixXd& raw) const {
  const Eigen::MatrixXd x = normalizer.transform(raw);
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  json j;
  j["format"] = "dascochlea-model";
  j["version"] = kCheckpointVersion;
  j["kind"] = ckpt.kind();
  j["seed"] = ckpt.seed;
  j["config_hash"] = hex64(ckpt.config_hash);
  j["agc"] = ckpt.agc;
  j["normalizer"] = {
      {"mean", std::vector<double>(ckpt.normalizer.mean().begin(), ckpt.normalizer.mean().end())},
      {"stddev",
       std::vector<double>(ckpt.normalizer.stddev().begin(), ckpt.normalizer.stddev().end())}};
  std::vector<double> params;
  if (const auto* lr = std::get_if<LogisticRegression<double>>(&ckpt.model)) {
    params.assign(lr->weights().begin(), lr->weights().end());
    params.push_back(lr->bias());
    j["input_dim"] = lr->weights().size();
    j["hidden"] = 0;
    j["outputs"] = 1;
  } else {
    const auto& mlp = std::get<Mlp<float>>(ckpt.model);
    params.assign(mlp.parameters().begin(), mlp.parameters().end());
    j["input_dim"] = mlp.input_dim();
    j["hidden"] = Mlp<float>::kHidden;
    j["outputs"] = Mlp<float>::kOutputs;
  }
  j["parameters"] = params;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("checkpoint is not valid JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != "dascochlea-model" || j.value("version", 0) != kCheckpointVersion) {
    throw InvalidArgument("unsupported checkpoint format in " + path.string());
  }
  Checkpoint ck;
  ck.seed = j.at("seed").get<std::uint64_t>();
  ck.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
  ck.agc = j.at("agc").get<bool>();
  const auto mean = j.at("normalizer").at("mean").get<std::vector<double>>();
  const auto sd = j.at("normalizer").at("stddev").get<std::vector<double>>();
  ck.normalizer = FeatureNormalizer(
      Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size())),
      Eigen::Map<const Eigen::VectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size())));
  const auto params = j.at("parameters").get<std::vector<double>>();
  const auto dim = j.at("input_dim").get<Eigen::Index>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lr") {
    if (static_cast<Eigen::Index>(params.size()) != dim + 1) {
      throw InvalidArgument("LR checkpoint parameter count mismatch");
    }
    ck.model = LogisticRegression<double>(
        Eigen::Map<const Eigen::VectorXd>(params.data(), dim), params.back());
  } else if (kind == "dnn") {
    Mlp<float> mlp(dim);
    if (static_cast<Eigen::Index>(params.size()) != mlp.parameter_count()) {
      throw InvalidArgument("DNN checkpoint parameter count mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      mlp.mutable_parameters()[static_cast<Eigen::Index>(i)] = static_cast<float>(params[i]);
    }
    ck.model = std::move(mlp);
  } else {
    throw InvalidArgument("unknown model kind: " + kind);
  }
  return ck;
}

}  // namespace dascochlea
