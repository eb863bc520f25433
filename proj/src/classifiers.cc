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
#include "dascochlea/classifiers.h"

namespace dascochlea {

void check_training_set(const Eigen::MatrixXd& x, const Eigen::VectorXi& labels) {
  if (x.rows() == 0) throw InvalidArgument("empty training set");
  if (x.rows() != labels.size()) {
    throw InvalidArgument("feature and label counts differ");
  }
  if (!x.allFinite()) throw InvalidArgument("training features must be finite");
  bool seen[2] = {false, false};
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw InvalidArgument("labels must be 0 or 1");
    seen[labels[i]] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw InvalidArgument("training data must contain both classes");
  }
}

IndexSplit validation_split(Eigen::Index n, double val_fraction, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("need at least two rows to split");
  if (val_fraction <= 0.0 || val_fraction >= 1.0) {
    throw InvalidArgument("val_fraction must lie in (0, 1)");
  }
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n)));
  n_val = std::clamp<std::size_t>(n_val, 1, idx.size() - 1);
  IndexSplit split;
  split.val.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  split.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  return split;
}

AccuracyReport evaluate(std::span<const int> predictions, std::span<const int> labels,
                        std::span<const double> amplitudes) {
  if (predictions.empty()) throw InvalidArgument("cannot evaluate an empty set");
  if (predictions.size() != labels.size() || labels.size() != amplitudes.size()) {
    throw InvalidArgument("predictions, labels and amplitudes must align");
  }
  AccuracyReport rep;
  rep.count = predictions.size();
  std::map<double, std::pair<std::size_t, std::size_t>> tally;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool ok = predictions[i] == labels[i];
    correct += ok;
    auto& t = tally[amplitudes[i]];
    t.first += ok;
    ++t.second;
  }
  rep.overall = static_cast<double>(correct) / static_cast<double>(rep.count);
  double sum = 0.0;
  for (const auto& [amp, t] : tally) {
    const double acc = static_cast<double>(t.first) / static_cast<double>(t.second);
    rep.per_amplitude[amp] = acc;
    sum += acc;
  }
  rep.mean_across_amplitudes = sum / static_cast<double>(tally.size());
  return rep;
}

double relative_error_decrease(double acc_agc, double acc_non_agc) {
  const double err_non = 1.0 - acc_non_agc;
  if (!(err_non > 0.0)) {
    throw InvalidArgument("relative error decrease is undefined at 100% baseline accuracy");
  }
  return 100.0 * (err_non - (1.0 - acc_agc)) / err_non;
}

}  // namespace dascochlea
