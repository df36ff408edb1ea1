#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "annoaudit/classifier.hpp"
#include "annoaudit/filter.hpp"
#include "annoaudit/ingest.hpp"
#include "annoaudit/model.hpp"
#include "annoaudit/silhouette.hpp"

namespace annoaudit {

/// Instance-level partition: floor(train_ratio * M) instances go to train,
/// chosen by a Fisher-Yates shuffle of the canonical order driven by
/// `derive_key(seed, "split")`. Throws ConfigError on an empty dataset.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_ratio, std::uint64_t seed);

/// Feature rows for the given instances, in dataset order. Throws LookupError
/// when an instance has no embedding.
Matrix feature_matrix(const Dataset& dataset, const EmbeddingStore& store);

inline constexpr std::size_t kConfidenceBins = 20;

struct ConfidenceSummary {
  double mean = 0.0;
  /// 20 uniform bins over [0, 1]; 1.0 falls in the last bin.
  std::array<std::uint64_t, kConfidenceBins> histogram{};
};

ConfidenceSummary summarize_confidence(const std::vector<ConfidenceRecord>& records);

struct EvalResult {
  FilterStrategy strategy = FilterStrategy::Entropy;
  double fraction = 0.0;
  unsigned seed_index = 0;
  /// Per-run seed derived from the master seed and seed_index.
  std::uint64_t run_seed = 0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  ConfidenceSummary confidence;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  /// Set when the cell could not be trained/evaluated; metrics are then 0.
  bool degenerate = false;
  std::string note;
};

struct SweepConfig {
  std::vector<FilterStrategy> strategies;
  std::vector<double> fractions;
  unsigned n_seeds = 5;
  std::uint64_t master_seed = 0;
  double train_ratio = 0.7;
  TrainConfig train;
  /// Split first, filter only the training part, evaluate on unfiltered test data.
  /// Off by default: the standard protocol filters, then splits.
  bool clean_test = false;
  /// Workers for the grid and the silhouette audit (0 = all cores).
  unsigned threads = 1;
};

/// Scores shared by every cell of a sweep, computed once on the full dataset.
struct SweepInputs {
  const Dataset* dataset = nullptr;
  const EmbeddingStore* store = nullptr;
  std::vector<EntropyScore> entropy;
  std::vector<double> silhouette;
};

/// Computes the scores the requested strategies need.
SweepInputs prepare_sweep(const Dataset& dataset, const EmbeddingStore& store,
                          const std::vector<FilterStrategy>& strategies, unsigned threads);

/// Seed of run `seed_index`; shared by all strategies and fractions so that
/// fraction-0 cells coincide and comparisons at a fraction are paired.
std::uint64_t run_seed(std::uint64_t master_seed, unsigned seed_index) noexcept;

/// One grid cell: filter -> majority labels -> split -> train -> evaluate.
/// Data problems (too few instances, single-class train set, divergence) give
/// a degenerate row instead of an exception.
EvalResult evaluate_cell(const SweepInputs& inputs, FilterStrategy strategy, double fraction, unsigned seed_index,
                         const SweepConfig& config);

/// Full grid, ordered strategy-major, then fraction, then seed. Throws
/// ConfigError for invalid fractions/configs and SchemaError when the store
/// lacks embeddings for some instance.
std::vector<EvalResult> sweep(const Dataset& dataset, const EmbeddingStore& store, const SweepConfig& config);

}  // namespace annoaudit
