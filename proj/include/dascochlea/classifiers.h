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
#ifndef DASCOCHLEA_CLASSIFIERS_H_
#define DASCOCHLEA_CLASSIFIERS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dascochlea/common.h"

namespace dascochlea {

// Labels are 0 (noise) or 1 (speech); feature rows are samples.
void check_training_set(const Eigen::MatrixXd& x, const Eigen::VectorXi& labels);

// ---------------------------------------------------------------------------
// Logistic regression

struct LrConfig {
  double l2 = 1e-4;
  double grad_tol = 1e-6;
  int max_iterations = 200;
};

struct LrTrainReport {
  int iterations = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

template <typename Scalar>
class LogisticRegression {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit LogisticRegression(Eigen::Index dim = 0)
      : weights_(Vector::Zero(dim)) {}
  LogisticRegression(Vector weights, Scalar bias)
      : weights_(std::move(weights)), bias_(bias) {}

  template <typename Derived>
  Vector decision(const Eigen::MatrixBase<Derived>& x) const {
    return (x.template cast<Scalar>() * weights_).array() + bias_;
  }

  // P(label = 1) per row, always inside (0, 1) up to rounding.
  template <typename Derived>
  Vector predict_proba(const Eigen::MatrixBase<Derived>& x) const {
    return decision(x).unaryExpr([](Scalar z) { return sigmoid(z); });
  }

  template <typename Derived>
  Eigen::VectorXi predict(const Eigen::MatrixBase<Derived>& x) const {
    return (decision(x).array() > Scalar(0)).template cast<int>();
  }

  // Mean cross-entropy plus l2/2 * |w|^2 (the bias is not penalized).
  template <typename Derived>
  Scalar loss(const Eigen::MatrixBase<Derived>& x, const Eigen::VectorXi& labels,
              Scalar l2) const {
    const Vector z = decision(x);
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      acc += labels[i] ? softplus(-z[i]) : softplus(z[i]);
    }
    return acc / Scalar(z.size()) + Scalar(0.5) * l2 * weights_.squaredNorm();
  }

  const Vector& weights() const { return weights_; }
  Scalar bias() const { return bias_; }
  Vector& mutable_weights() { return weights_; }
  Scalar& mutable_bias() { return bias_; }

  static Scalar sigmoid(Scalar z) {
    return z >= 0 ? Scalar(1) / (Scalar(1) + std::exp(-z))
                  : std::exp(z) / (Scalar(1) + std::exp(z));
  }
  static Scalar softplus(Scalar z) {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  }

 private:
  Vector weights_;
  Scalar bias_ = 0;
};

// Damped Newton iterations with Armijo backtracking on the regularized
// cross-entropy, starting from zero weights. Stops at grad_tol.
template <typename Scalar = double>
LogisticRegression<Scalar> lr_train(const Eigen::MatrixXd& features,
                                    const Eigen::VectorXi& labels,
                                    const LrConfig& config = {},
                                    LrTrainReport* report = nullptr) {
  using Matrix = typename LogisticRegression<Scalar>::Matrix;
  using Vector = typename LogisticRegression<Scalar>::Vector;
  check_training_set(features, labels);
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  // Augmented design matrix: last column is the bias input.
  Matrix xa(n, d + 1);
  xa.leftCols(d) = features.cast<Scalar>();
  xa.col(d).setOnes();
  const Vector y = labels.cast<Scalar>();
  const auto l2 = static_cast<Scalar>(config.l2);

  Vector theta = Vector::Zero(d + 1);
  auto objective = [&](const Vector& th) {
    LogisticRegression<Scalar> m(th.head(d), th[d]);
    return m.loss(features, labels, l2);
  };
  Vector reg = Vector::Constant(d + 1, l2);
  reg[d] = 0;

  LrTrainReport rep;
  Scalar f = objective(theta);
  rep.initial_loss = static_cast<double>(f);
  for (int it = 0; it < config.max_iterations; ++it) {
    const Vector z = xa * theta;
    const Vector p = z.unaryExpr([](Scalar v) { return LogisticRegression<Scalar>::sigmoid(v); });
    const Vector grad =
        xa.transpose() * (p - y) / Scalar(n) + reg.cwiseProduct(theta);
    rep.grad_norm = static_cast<double>(grad.norm());
    if (rep.grad_norm < config.grad_tol) {
      rep.converged = true;
      break;
    }
    const Vector curvature = (p.array() * (Scalar(1) - p.array())).matrix();
    Matrix hessian = xa.transpose() * curvature.asDiagonal() * xa / Scalar(n);
    hessian.diagonal() += reg;
    hessian.diagonal().array() += Scalar(1e-10);
    const Vector step = hessian.ldlt().solve(grad);
    const Scalar slope = grad.dot(step);
    Scalar t = 1;
    Vector candidate = theta - step;
    Scalar f_new = objective(candidate);
    while (f_new > f - Scalar(1e-4) * t * slope && t > Scalar(1e-12)) {
      t /= 2;
      candidate = theta - t * step;
      f_new = objective(candidate);
    }
    theta = candidate;
    f = f_new;
    rep.iterations = it + 1;
  }
  rep.final_loss = static_cast<double>(f);
  if (!rep.converged) {
    const Vector p = (xa * theta).unaryExpr(
        [](Scalar v) { return LogisticRegression<Scalar>::sigmoid(v); });
    const Vector grad = xa.transpose() * (p - y) / Scalar(n) + reg.cwiseProduct(theta);
    rep.grad_norm = static_cast<double>(grad.norm());
    rep.converged = rep.grad_norm < config.grad_tol;
  }
  if (report) *report = rep;
  return LogisticRegression<Scalar>(theta.head(d), theta[d]);
}

// ---------------------------------------------------------------------------
// Two-hidden-layer perceptron: in -> 64 ReLU -> 64 ReLU -> 2 logits.

struct TrainConfig {
  int epochs = 50;
  int batch_size = 64;
  double learning_rate = 5e-5;
  double dropout = 0.3;
  double val_fraction = 0.25;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

template <typename Scalar>
class Mlp {
 public:
  static constexpr Eigen::Index kHidden = 64;
  static constexpr Eigen::Index kOutputs = 2;

  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;
  using VectorMap = Eigen::Map<Vector>;
  using ConstVectorMap = Eigen::Map<const Vector>;

  // Dropout keep masks (already scaled by 1/keep), one column per sample.
  struct DropoutMasks {
    Matrix hidden1;
    Matrix hidden2;
  };

  explicit Mlp(Eigen::Index input_dim = 152)
      : input_dim_(input_dim), theta_(Vector::Zero(parameter_count(input_dim))) {}

  static Eigen::Index parameter_count(Eigen::Index input_dim) {
    return input_dim * kHidden + kHidden + kHidden * kHidden + kHidden +
           kHidden * kOutputs + kOutputs;
  }
  Eigen::Index parameter_count() const { return theta_.size(); }
  Eigen::Index input_dim() const { return input_dim_; }

  // Uniform fan-in scaled weights, zero biases.
  void init(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    theta_.setZero();
    auto fill = [&](Scalar* data, Eigen::Index count, Eigen::Index fan_in, double gain) {
      const double bound = std::sqrt(gain * 3.0 / static_cast<double>(fan_in));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (Eigen::Index i = 0; i < count; ++i) data[i] = static_cast<Scalar>(dist(rng));
    };
    fill(theta_.data() + off_w1(), kHidden * input_dim_, input_dim_, 2.0);
    fill(theta_.data() + off_w2(), kHidden * kHidden, kHidden, 2.0);
    fill(theta_.data() + off_w3(), kOutputs * kHidden, kHidden, 1.0);
  }

  ConstMatrixMap w1() const { return {theta_.data() + off_w1(), kHidden, input_dim_}; }
  ConstVectorMap b1() const { return {theta_.data() + off_b1(), kHidden}; }
  ConstMatrixMap w2() const { return {theta_.data() + off_w2(), kHidden, kHidden}; }
  ConstVectorMap b2() const { return {theta_.data() + off_b2(), kHidden}; }
  ConstMatrixMap w3() const { return {theta_.data() + off_w3(), kOutputs, kHidden}; }
  ConstVectorMap b3() const { return {theta_.data() + off_b3(), kOutputs}; }

  // Flat parameter vector: W1, b1, W2, b2, W3, b3 (column-major blocks).
  const Vector& parameters() const { return theta_; }
  Vector& mutable_parameters() { return theta_; }

  // Inference logits, one row per sample. No dropout.
  template <typename Derived>
  Matrix logits(const Eigen::MatrixBase<Derived>& x) const {
    const Matrix xt = x.template cast<Scalar>().transpose();
    const Matrix h1 = ((w1() * xt).colwise() + b1()).cwiseMax(Scalar(0));
    const Matrix h2 = ((w2() * h1).colwise() + b2()).cwiseMax(Scalar(0));
    return ((w3() * h2).colwise() + b3()).transpose();
  }

  template <typename Derived>
  Eigen::VectorXi predict(const Eigen::MatrixBase<Derived>& x) const {
    const Matrix z = logits(x);
    return (z.col(1).array() > z.col(0).array()).template cast<int>();
  }

  // Mean softmax cross-entropy over the rows of x. Fills `grad` (same layout
  // as parameters()) when non-null; applies `masks` after each ReLU when
  // non-null.
  template <typename Derived>
  Scalar loss_and_gradient(const Eigen::MatrixBase<Derived>& x,
                           std::span<const int> labels, Vector* grad,
                           const DropoutMasks* masks = nullptr) const {
    const Eigen::Index batch = x.rows();
    const Matrix xt = x.template cast<Scalar>().transpose();
    const Matrix z1 = (w1() * xt).colwise() + b1();
    Matrix h1 = z1.cwiseMax(Scalar(0));
    if (masks) h1.array() *= masks->hidden1.array();
    const Matrix z2 = (w2() * h1).colwise() + b2();
    Matrix h2 = z2.cwiseMax(Scalar(0));
    if (masks) h2.array() *= masks->hidden2.array();
    const Matrix z3 = (w3() * h2).colwise() + b3();

    Matrix prob(kOutputs, batch);
    Scalar total = 0;
    for (Eigen::Index j = 0; j < batch; ++j) {
      const Scalar m = z3.col(j).maxCoeff();
      const Vector e = (z3.col(j).array() - m).exp().matrix();
      const Scalar s = e.sum();
      prob.col(j) = e / s;
      total += -(z3(labels[j], j) - m - std::log(s));
    }
    const Scalar loss = total / Scalar(batch);
    if (!grad) return loss;

    grad->setZero(theta_.size());
    MatrixMap g_w1(grad->data() + off_w1(), kHidden, input_dim_);
    VectorMap g_b1(grad->data() + off_b1(), kHidden);
    MatrixMap g_w2(grad->data() + off_w2(), kHidden, kHidden);
    VectorMap g_b2(grad->data() + off_b2(), kHidden);
    MatrixMap g_w3(grad->data() + off_w3(), kOutputs, kHidden);
    VectorMap g_b3(grad->data() + off_b3(), kOutputs);

    Matrix d3 = prob;
    for (Eigen::Index j = 0; j < batch; ++j) d3(labels[j], j) -= Scalar(1);
    d3 /= Scalar(batch);
    g_w3.noalias() = d3 * h2.transpose();
    g_b3 = d3.rowwise().sum();

    Matrix d2 = w3().transpose() * d3;
    if (masks) d2.array() *= masks->hidden2.array();
    d2.array() *= (z2.array() > Scalar(0)).template cast<Scalar>();
    g_w2.noalias() = d2 * h1.transpose();
    g_b2 = d2.rowwise().sum();

    Matrix d1 = w2().transpose() * d2;
    if (masks) d1.array() *= masks->hidden1.array();
    d1.array() *= (z1.array() > Scalar(0)).template cast<Scalar>();
    g_w1.noalias() = d1 * xt.transpose();
    g_b1 = d1.rowwise().sum();
    return loss;
  }

 private:
  Eigen::Index off_w1() const { return 0; }
  Eigen::Index off_b1() const { return kHidden * input_dim_; }
  Eigen::Index off_w2() const { return off_b1() + kHidden; }
  Eigen::Index off_b2() const { return off_w2() + kHidden * kHidden; }
  Eigen::Index off_w3() const { return off_b2() + kHidden; }
  Eigen::Index off_b3() const { return off_w3() + kOutputs * kHidden; }

  Eigen::Index input_dim_;
  Vector theta_;
};

template <typename Scalar>
struct DnnTrainResult {
  Mlp<Scalar> model;
  double best_val_accuracy = 0.0;
  int best_epoch = 0;
  std::vector<double> val_accuracy;  // one entry per epoch
};

// Train/validation split used by dnn_train: a seeded shuffle with the first
// round(val_fraction * n) indices (at least one) held out.
struct IndexSplit {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> val;
};
IndexSplit validation_split(Eigen::Index n, double val_fraction, std::uint64_t seed);

template <typename Derived>
Eigen::MatrixXd select_rows(const Eigen::MatrixBase<Derived>& x,
                            std::span<const Eigen::Index> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]).template cast<double>();
  }
  return out;
}

// Minibatch ADAM on softmax cross-entropy with inverted dropout after each
// ReLU. Returns the epoch snapshot with the highest validation accuracy
// (earliest on ties).
template <typename Scalar = float>
DnnTrainResult<Scalar> dnn_train(const Eigen::MatrixXd& features,
                                 const Eigen::VectorXi& labels,
                                 const TrainConfig& config = {}) {
  using Vector = typename Mlp<Scalar>::Vector;
  using Matrix = typename Mlp<Scalar>::Matrix;
  check_training_set(features, labels);
  if (config.batch_size < 1 || config.epochs < 1) {
    throw InvalidArgument("epochs and batch_size must be positive");
  }
  if (config.dropout < 0.0 || config.dropout >= 1.0) {
    throw InvalidArgument("dropout must lie in [0, 1)");
  }
  const IndexSplit split =
      validation_split(features.rows(), config.val_fraction, config.seed);
  if (split.train.empty()) throw InvalidArgument("no rows left for training");
  const Eigen::MatrixXd x_val = select_rows(features, split.val);
  Eigen::VectorXi y_val(static_cast<Eigen::Index>(split.val.size()));
  for (std::size_t i = 0; i < split.val.size(); ++i) y_val[i] = labels[split.val[i]];

  Mlp<Scalar> model(features.cols());
  model.init(config.seed);
  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const Eigen::Index n_params = model.parameter_count();
  Vector m = Vector::Zero(n_params);
  Vector v = Vector::Zero(n_params);
  Vector grad(n_params);
  const auto lr = static_cast<Scalar>(config.learning_rate);
  const auto beta1 = static_cast<Scalar>(config.adam_beta1);
  const auto beta2 = static_cast<Scalar>(config.adam_beta2);
  const auto eps = static_cast<Scalar>(config.adam_epsilon);
  const double keep = 1.0 - config.dropout;
  std::int64_t step = 0;

  DnnTrainResult<Scalar> result{model, -1.0, 0, {}};
  std::vector<Eigen::Index> order = split.train;
  std::vector<int> batch_labels;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const std::span<const Eigen::Index> rows(order.data() + start, stop - start);
      const Eigen::MatrixXd xb = select_rows(features, rows);
      batch_labels.resize(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) batch_labels[i] = labels[rows[i]];

      typename Mlp<Scalar>::DropoutMasks masks;
      const auto b = static_cast<Eigen::Index>(rows.size());
      auto draw = [&](Matrix& mask) {
        mask.resize(Mlp<Scalar>::kHidden, b);
        for (Eigen::Index j = 0; j < mask.size(); ++j) {
          mask.data()[j] = unit(rng) < keep ? static_cast<Scalar>(1.0 / keep) : Scalar(0);
        }
      };
      draw(masks.hidden1);
      draw(masks.hidden2);
      model.loss_and_gradient(xb, batch_labels, &grad,
                              config.dropout > 0.0 ? &masks : nullptr);

      ++step;
      m = beta1 * m + (Scalar(1) - beta1) * grad;
      v = beta2 * v + (Scalar(1) - beta2) * grad.cwiseAbs2();
      const Scalar c1 = Scalar(1) - std::pow(beta1, static_cast<Scalar>(step));
      const Scalar c2 = Scalar(1) - std::pow(beta2, static_cast<Scalar>(step));
      model.mutable_parameters().array() -=
          lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    }
    const Eigen::VectorXi pred = model.predict(x_val);
    const double acc = (pred.array() == y_val.array()).template cast<double>().mean();
    result.val_accuracy.push_back(acc);
    if (acc > result.best_val_accuracy) {
      result.best_val_accuracy = acc;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Evaluation

struct AccuracyReport {
  double overall = 0.0;
  std::map<double, double> per_amplitude;  // amplitude -> accuracy
  double mean_across_amplitudes = 0.0;     // unweighted mean of per_amplitude
  std::size_t count = 0;
};

AccuracyReport evaluate(std::span<const int> predictions, std::span<const int> labels,
                        std::span<const double> amplitudes);

template <typename Model, typename Derived>
AccuracyReport evaluate(const Model& model, const Eigen::MatrixBase<Derived>& x,
                        const Eigen::VectorXi& labels,
                        std::span<const double> amplitudes) {
  const Eigen::VectorXi pred = model.predict(x);
  return evaluate(std::span<const int>(pred.data(), static_cast<std::size_t>(pred.size())),
                  std::span<const int>(labels.data(), static_cast<std::size_t>(labels.size())),
                  amplitudes);
}

// 100 * (err_non_agc - err_agc) / err_non_agc, errors being 1 - accuracy.
double relative_error_decrease(double acc_agc, double acc_non_agc);

}  // namespace dascochlea

#endif  // DASCOCHLEA_CLASSIFIERS_H_
