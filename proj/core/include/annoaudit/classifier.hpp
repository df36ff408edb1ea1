#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace annoaudit {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct TrainConfig {
  int epochs = 5;
  double learning_rate = 0.01;
  std::size_t batch_size = 50;
  std::uint64_t seed = 0;
  double l2_penalty = 0.0;

  /// Throws ConfigError.
  void validate() const;
};

/// Multinomial logistic regression: p(y | x) = softmax(W x + b).
class ClassifierModel {
 public:
  ClassifierModel(std::size_t labels, std::size_t dim);

  std::size_t label_count() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(weights_.cols()); }

  /// labels x dim
  Matrix& weights() noexcept { return weights_; }
  const Matrix& weights() const noexcept { return weights_; }
  Vector& bias() noexcept { return bias_; }
  const Vector& bias() const noexcept { return bias_; }

  /// Row-wise softmax probabilities (rows x labels). Throws ConfigError on a dim mismatch.
  Matrix probabilities(const Matrix& features) const;

 private:
  Matrix weights_;
  Vector bias_;
};

struct Prediction {
  /// Argmax label per row; ties go to the lowest label index.
  std::vector<std::size_t> labels;
  Matrix probabilities;
};

Prediction predict(const ClassifierModel& model, const Matrix& features);

struct Gradient {
  Matrix weights;
  Vector bias;
};

/// Mean cross-entropy over the rows plus (l2 / 2) * |W|^2.
double cross_entropy_loss(const ClassifierModel& model, const Matrix& features, std::span<const std::size_t> labels,
                          double l2_penalty = 0.0);
/// Analytic gradient of cross_entropy_loss.
Gradient cross_entropy_gradient(const ClassifierModel& model, const Matrix& features,
                                std::span<const std::size_t> labels, double l2_penalty = 0.0);

/// Training-dynamics record of one training row.
struct ConfidenceRecord {
  std::size_t row = 0;
  /// Probability of the row's label at the end of each epoch.
  std::vector<double> epoch_probabilities;
  /// Mean of epoch_probabilities.
  double confidence = 0.0;
};

struct TrainResult {
  ClassifierModel model;
  std::vector<ConfidenceRecord> confidence;
  /// Full-data loss at the end of each epoch.
  std::vector<double> epoch_loss;
};

/// Mini-batch gradient descent on cross-entropy from zero weights for exactly
/// `config.epochs` epochs; rows are reshuffled each epoch from
/// `derive_key(config.seed, "train-shuffle")`. Throws ConfigError for invalid
/// configs or misaligned inputs, DomainError when fewer than two distinct
/// labels are present or the loss becomes non-finite.
TrainResult train(const Matrix& features, std::span<const std::size_t> labels, std::size_t label_count,
                  const TrainConfig& config);

/// Arithmetic mean with compensated summation.
double mean_confidence(std::span<const double> epoch_probabilities);

struct MacroF1 {
  double value = 0.0;
  std::vector<double> per_label;
  /// Labels that appear in neither the truth nor the predictions (scored 0).
  std::vector<std::size_t> absent_labels;
};

/// Unweighted mean of per-label F1 over all `label_count` labels; a label with
/// precision + recall = 0 scores 0. Throws ConfigError on length mismatch.
MacroF1 macro_f1(std::span<const std::size_t> truth, std::span<const std::size_t> predicted, std::size_t label_count);

/// Throws ConfigError on length mismatch or empty input.
double accuracy(std::span<const std::size_t> truth, std::span<const std::size_t> predicted);

}  // namespace annoaudit
