#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "annoaudit/ingest.hpp"
#include "annoaudit/model.hpp"

namespace annoaudit {

/// Planted-cluster dataset generator with known injected noise.
struct SynthConfig {
  std::size_t labels = 5;
  std::size_t dim = 16;
  std::size_t instances = 2000;
  std::size_t annotators = 3;
  /// Probability that a judgment is a uniformly drawn wrong label.
  double mislabel_rate = 0.2;
  /// Probability that a judgment comes from the label's confusable pair.
  double subjective_rate = 0.0;
  /// Pairwise distance between cluster centroids, in units of the within-cluster std (1).
  double separation = 8.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError (labels >= 2, dim >= labels, annotators >= 1,
  /// rates in [0,1] with sum <= 1, separation >= 0, instances >= 1).
  void validate() const;
};

enum class JudgmentNoise { Clean, Mislabeled, Subjective };

std::string_view to_string(JudgmentNoise noise) noexcept;

struct NoiseMask {
  /// Aligned with Dataset::judgments().
  std::vector<JudgmentNoise> judgments;
  /// Latent label of each instance, aligned with Dataset::instances().
  std::vector<std::size_t> true_labels;
};

struct SynthData {
  Dataset dataset;
  EmbeddingStore embeddings;
  NoiseMask mask;
};

/// Label k's confusable partner: k ^ 1, or k - 1 for the last label of an odd vocabulary.
std::size_t confusable_partner(std::size_t label, std::size_t label_count) noexcept;

/// Instance i ("t000000", ...) draws a latent label uniformly, an embedding
/// from N(c_z, I) with centroids (s / sqrt 2) * e_k, and one label from each of
/// A annotators ("a0", ...): the latent label with probability 1 - rho - sigma,
/// a uniform wrong label with probability rho (Mislabeled), or one of the pair
/// {z, partner(z)} uniformly with probability sigma (Subjective). Annotators
/// that pick the same label as an earlier annotator still produce their own
/// judgment. Label names are "L0", "L1", ...
SynthData generate(const SynthConfig& config);

}  // namespace annoaudit
