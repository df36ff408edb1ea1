#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annoaudit/entropy.hpp"
#include "annoaudit/model.hpp"

namespace annoaudit {

enum class FilterStrategy { Entropy, Silhouette, RandomInstances, RandomJudgments };

std::string_view to_string(FilterStrategy strategy) noexcept;
/// Accepts entropy | silhouette | random_instances | random_judgments.
FilterStrategy parse_strategy(std::string_view name);

/// Granularity of a strategy: whole instances or single judgments.
bool removes_instances(FilterStrategy strategy) noexcept;

struct FilterPlan {
  FilterStrategy strategy = FilterStrategy::Entropy;
  double fraction = 0.0;
  /// Only used by the random strategies.
  std::uint64_t seed = 0;
};

struct RemovalLog {
  FilterPlan plan;
  std::size_t original_instances = 0;
  std::size_t original_judgments = 0;
  /// Instances that no longer appear in the refined dataset.
  std::vector<std::string> removed_instances;
  std::vector<Judgment> removed_judgments;
  std::size_t kept_instances = 0;
  std::size_t kept_judgments = 0;
};

struct FilterResult {
  Dataset dataset;
  RemovalLog log;
};

/// floor(fraction * population), tolerant of binary rounding just below an
/// integer (0.29 * 100 removes 29, not 28). Throws ConfigError unless fraction in [0,1].
std::size_t removal_count(double fraction, std::size_t population);

/// Removes the floor(fraction * M) highest-entropy instances with all their
/// judgments. Equal entropies: ascending instance id is removed first.
/// `scores` must be aligned with the dataset's instances.
FilterResult filter_entropy(const Dataset& dataset, std::span<const EntropyScore> scores, double fraction);

/// Removes the floor(fraction * J) lowest-scoring judgments; instances left
/// without judgments are dropped. Equal scores: ascending
/// (instance_id, label, annotator_id) is removed first.
/// `judgment_scores` must be aligned with Dataset::judgments().
FilterResult filter_silhouette(const Dataset& dataset, std::span<const double> judgment_scores, double fraction);

enum class Granularity { Instances, Judgments };

/// Uniform sample without replacement: a partial Fisher-Yates shuffle of the
/// canonical order driven by `derive_key(seed, "filter-random", {granularity})`.
/// The removal set for a smaller fraction is a prefix of that for a larger one.
FilterResult filter_random(const Dataset& dataset, double fraction, std::uint64_t seed, Granularity granularity);

}  // namespace annoaudit
