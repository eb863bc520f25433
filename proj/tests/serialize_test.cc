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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace dascochlea {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class SerializeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "dascochlea_serialize_test";
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

FeatureSet random_set(int rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  FeatureSet s;
  s.agc = true;
  s.x.resize(rows, kFeatureDim);
  s.labels.resize(rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < kFeatureDim; ++c) s.x(r, c) = g(rng) * (c + 1) + (r % 2) * 0.5;
    s.labels[r] = r % 2;
    s.amplitude_mV.push_back(r < rows / 2 ? 2.5 : 80.0);
    s.recording_id.push_back("test-000" + std::to_string(r) + "-noise-tones");
  }
  return s;
}

TEST_F(SerializeTest, FeatureCsvRoundTripIsExact) {
  const FeatureSet s = random_set(12, 1);
  write_features_csv(dir_ / "f.csv", s);
  const FeatureSet back = read_features_csv(dir_ / "f.csv");
  EXPECT_EQ(back.x, s.x);
  EXPECT_EQ(back.labels, s.labels);
  EXPECT_EQ(back.amplitude_mV, s.amplitude_mV);
  EXPECT_EQ(back.recording_id, s.recording_id);
  EXPECT_TRUE(back.agc);
  const std::string text = slurp(dir_ / "f.csv");
  EXPECT_EQ(text.substr(0, 9), "f0,f1,f2,");
  EXPECT_NE(text.find("f151,label,recording_id,amplitude_mV,agc\n"), std::string::npos);
}

TEST_F(SerializeTest, FeatureCsvRejectsOtherFiles) {
  std::ofstream(dir_ / "bad.csv") << "a,b\n1,2\n";
  EXPECT_THROW(read_features_csv(dir_ / "bad.csv"), InvalidArgument);
  EXPECT_ANY_THROW(read_features_csv(dir_ / "missing.csv"));
}

TEST_F(SerializeTest, LrCheckpointRoundTrip) {
  const FeatureSet s = random_set(60, 2);
  const auto norm = FeatureNormalizer::fit(s.x);
  Checkpoint ck{lr_train(norm.transform(s.x), s.labels), norm, 7, 0xDEADBEEFCAFEF00DULL, true};
  save_checkpoint(dir_ / "lr.json", ck);
  const Checkpoint back = load_checkpoint(dir_ / "lr.json");
  EXPECT_EQ(back.kind(), "lr");
  EXPECT_EQ(back.seed, 7u);
  EXPECT_EQ(back.config_hash, 0xDEADBEEFCAFEF00DULL);
  const auto& a = std::get<LogisticRegression<double>>(ck.model);
  const auto& b = std::get<LogisticRegression<double>>(back.model);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.bias(), b.bias());
  EXPECT_EQ(back.predict(s.x), ck.predict(s.x));
}

TEST_F(SerializeTest, DnnCheckpointRoundTrip) {
  const FeatureSet s = random_set(40, 3);
  const auto norm = FeatureNormalizer::fit(s.x);
  Mlp<float> mlp;
  mlp.init(5);
  Checkpoint ck{mlp, norm, 5, 1, false};
  save_checkpoint(dir_ / "dnn.json", ck);
  const Checkpoint back = load_checkpoint(dir_ / "dnn.json");
  EXPECT_EQ(back.kind(), "dnn");
  EXPECT_FALSE(back.agc);
  EXPECT_EQ(std::get<Mlp<float>>(back.model).parameters(), mlp.parameters());
  EXPECT_EQ(back.normalizer.mean(), norm.mean());
  EXPECT_EQ(back.predict(s.x), ck.predict(s.x));
}

TEST_F(SerializeTest, CheckpointRejectsForeignJson) {
  std::ofstream(dir_ / "x.json") << R"({"format": "other", "version": 1})";
  EXPECT_THROW(load_checkpoint(dir_ / "x.json"), InvalidArgument);
  std::ofstream(dir_ / "y.json") << "not json";
  EXPECT_THROW(load_checkpoint(dir_ / "y.json"), InvalidArgument);
}

TEST_F(SerializeTest, GainTraceAndWindowsCsv) {
  GainTrace t;
  t.record({0, 30, 11});
  t.record({1600, 30, 10});
  write_gain_trace_csv(dir_ / "g.csv", t);
  EXPECT_EQ(slurp(dir_ / "g.csv"), "time_us,channel,gain_index\n0,30,11\n1600,30,10\n");
  const std::vector<WindowRecord> w = {{16600, 30, 20, GainDecision::kDecrease, 10}};
  write_windows_csv(dir_ / "w.csv", w);
  const std::string text = slurp(dir_ / "w.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "time_us,channel,spike_count,decision,gain_index");
  EXPECT_NE(text.find("16600,30,20,"), std::string::npos);
}

TEST_F(SerializeTest, FreqResponseCsvMarksFloor) {
  GainGrid g;
  g.amplitudes = {0.01};
  g.freqs_hz = {100.0, 480.0};
  g.values = {GainDb::below_floor(), GainDb(30.0)};
  write_freq_response_csv(dir_ / "fr.csv", g);
  EXPECT_EQ(slurp(dir_ / "fr.csv"),
            "amplitude_mV,freq_hz,gain_db\n1,100,below_floor\n1,480,30\n");
}

}  // namespace
}  // namespace dascochlea
