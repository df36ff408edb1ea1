#include "annoaudit/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "annoaudit/error.hpp"
#include "annoaudit/rng.hpp"

namespace annoaudit {

namespace {

void check_rows(const Matrix& features, std::span<const std::size_t> labels, std::size_t label_count) {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw ConfigError("feature rows (" + std::to_string(features.rows()) + ") do not match labels (" +
                      std::to_string(labels.size()) + ")");
  for (const std::size_t y : labels)
    if (y >= label_count) throw ConfigError("label index out of range");
}

// Softmax of logits in place, row by row, with max subtraction.
void softmax_rows(Matrix& logits) {
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    auto row = logits.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(l2_penalty >= 0.0)) throw ConfigError("l2 penalty must be >= 0");
}

ClassifierModel::ClassifierModel(std::size_t labels, std::size_t dim)
    : weights_(Matrix::Zero(static_cast<Eigen::Index>(labels), static_cast<Eigen::Index>(dim))),
      bias_(Vector::Zero(static_cast<Eigen::Index>(labels))) {
  if (labels < 2) throw ConfigError("classifier needs at least two labels");
}

Matrix ClassifierModel::probabilities(const Matrix& features) const {
  if (features.cols() != weights_.cols())
    throw ConfigError("feature dimension " + std::to_string(features.cols()) + " does not match model dimension " +
                      std::to_string(weights_.cols()));
  Matrix logits = features * weights_.transpose();
  logits.rowwise() += bias_.transpose();
  softmax_rows(logits);
  return logits;
}

Prediction predict(const ClassifierModel& model, const Matrix& features) {
  Prediction out;
  out.probabilities = model.probabilities(features);
  out.labels.resize(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index r = 0; r < out.probabilities.rows(); ++r) {
    Eigen::Index best = 0;
    // maxCoeff already returns the first maximum; spelled out to pin the tie rule.
    for (Eigen::Index c = 1; c < out.probabilities.cols(); ++c)
      if (out.probabilities(r, c) > out.probabilities(r, best)) best = c;
    out.labels[static_cast<std::size_t>(r)] = static_cast<std::size_t>(best);
  }
  return out;
}

double cross_entropy_loss(const ClassifierModel& model, const Matrix& features, std::span<const std::size_t> labels,
                          double l2_penalty) {
  check_rows(features, labels, model.label_count());
  Matrix logits = features * model.weights().transpose();
  logits.rowwise() += model.bias().transpose();
  double loss = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const auto row = logits.row(r);
    const double m = row.maxCoeff();
    const double lse = m + std::log((row.array() - m).exp().sum());
    loss += lse - row(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(r)]));
  }
  if (logits.rows() > 0) loss /= static_cast<double>(logits.rows());
  return loss + 0.5 * l2_penalty * model.weights().squaredNorm();
}

Gradient cross_entropy_gradient(const ClassifierModel& model, const Matrix& features,
                                std::span<const std::size_t> labels, double l2_penalty) {
  check_rows(features, labels, model.label_count());
  Matrix residual = model.probabilities(features);
  for (std::size_t r = 0; r < labels.size(); ++r) residual(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(labels[r])) -= 1.0;
  const double scale = labels.empty() ? 0.0 : 1.0 / static_cast<double>(labels.size());
  Gradient g;
  g.weights = scale * residual.transpose() * features + l2_penalty * model.weights();
  g.bias = scale * residual.colwise().sum().transpose();
  return g;
}

double mean_confidence(std::span<const double> epoch_probabilities) {
  if (epoch_probabilities.empty()) return 0.0;
  double sum = 0.0, comp = 0.0;
  for (const double x : epoch_probabilities) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(epoch_probabilities.size());
}

TrainResult train(const Matrix& features, std::span<const std::size_t> labels, std::size_t label_count,
                  const TrainConfig& config) {
  config.validate();
  check_rows(features, labels, label_count);
  std::vector<bool> seen(label_count, false);
  for (const std::size_t y : labels) seen[y] = true;
  if (std::count(seen.begin(), seen.end(), true) < 2)
    throw DomainError("training set needs at least two distinct labels");

  const std::size_t n = labels.size();
  TrainResult result{ClassifierModel(label_count, static_cast<std::size_t>(features.cols())), {}, {}};
  ClassifierModel& model = result.model;
  result.confidence.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    result.confidence[r].row = r;
    result.confidence[r].epoch_probabilities.reserve(static_cast<std::size_t>(config.epochs));
  }

  Stream shuffle(derive_key(config.seed, "train-shuffle"));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Matrix batch_x;
  std::vector<std::size_t> batch_y;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffle.uniform_below(i)]);

    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, n - start);
      batch_x.resize(static_cast<Eigen::Index>(len), features.cols());
      batch_y.resize(len);
      for (std::size_t k = 0; k < len; ++k) {
        batch_x.row(static_cast<Eigen::Index>(k)) = features.row(static_cast<Eigen::Index>(order[start + k]));
        batch_y[k] = labels[order[start + k]];
      }
      const Gradient g = cross_entropy_gradient(model, batch_x, batch_y, config.l2_penalty);
      model.weights() -= config.learning_rate * g.weights;
      model.bias() -= config.learning_rate * g.bias;
    }

    const double loss = cross_entropy_loss(model, features, labels, config.l2_penalty);
    if (!std::isfinite(loss) || !model.weights().allFinite())
      throw DomainError("training diverged at epoch " + std::to_string(epoch + 1) +
                        " (non-finite loss); lower the learning rate");
    result.epoch_loss.push_back(loss);

    const Matrix probs = model.probabilities(features);
    for (std::size_t r = 0; r < n; ++r)
      result.confidence[r].epoch_probabilities.push_back(
          probs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(labels[r])));
  }
  for (ConfidenceRecord& rec : result.confidence) rec.confidence = mean_confidence(rec.epoch_probabilities);
  return result;
}

MacroF1 macro_f1(std::span<const std::size_t> truth, std::span<const std::size_t> predicted, std::size_t label_count) {
  if (truth.size() != predicted.size()) throw ConfigError("macro_f1: truth and predictions differ in length");
  std::vector<std::size_t> tp(label_count, 0), fp(label_count, 0), fn(label_count, 0);
  std::vector<bool> present(label_count, false);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= label_count || predicted[i] >= label_count) throw ConfigError("macro_f1: label out of range");
    present[truth[i]] = present[predicted[i]] = true;
    if (truth[i] == predicted[i]) {
      ++tp[truth[i]];
    } else {
      ++fp[predicted[i]];
      ++fn[truth[i]];
    }
  }
  MacroF1 out;
  out.per_label.resize(label_count, 0.0);
  double sum = 0.0;
  for (std::size_t l = 0; l < label_count; ++l) {
    if (!present[l]) out.absent_labels.push_back(l);
    const std::size_t denom = 2 * tp[l] + fp[l] + fn[l];
    out.per_label[l] = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp[l]) / static_cast<double>(denom);
    sum += out.per_label[l];
  }
  out.value = label_count == 0 ? 0.0 : sum / static_cast<double>(label_count);
  return out;
}

double accuracy(std::span<const std::size_t> truth, std::span<const std::size_t> predicted) {
  if (truth.size() != predicted.size()) throw ConfigError("accuracy: truth and predictions differ in length");
  if (truth.empty()) throw ConfigError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace annoaudit
