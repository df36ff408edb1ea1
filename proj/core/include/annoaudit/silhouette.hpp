#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annoaudit/ingest.hpp"
#include "annoaudit/model.hpp"

namespace annoaudit {

/// Points in embedding space grouped into clusters (one cluster per label).
///
/// Coordinates are float32 and row-major (`dim` values per point). Clusters
/// are indexed [0, cluster_count); some may be empty, but at least two must not be.
class ClusterPointSet {
 public:
  /// Key of a point built from a dataset: the (instance, label) pair it represents.
  struct Key {
    std::size_t instance = 0;
    std::size_t label = 0;
  };

  /// Throws DomainError if fewer than two clusters are non-empty,
  /// ConfigError on inconsistent sizes.
  ClusterPointSet(std::size_t dim, std::vector<float> coords, std::vector<std::size_t> cluster_of,
                  std::size_t cluster_count, std::vector<Key> keys = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return cluster_of_.size(); }
  std::size_t cluster_count() const noexcept { return members_.size(); }
  std::size_t cluster_of(std::size_t point) const { return cluster_of_[point]; }
  std::span<const std::size_t> members(std::size_t cluster) const { return members_[cluster]; }
  std::span<const float> point(std::size_t p) const { return {coords_.data() + p * dim_, dim_}; }
  std::span<const float> coords() const noexcept { return coords_; }
  /// Empty unless built from a dataset.
  std::span<const Key> keys() const noexcept { return keys_; }

 private:
  std::size_t dim_;
  std::vector<float> coords_;
  std::vector<std::size_t> cluster_of_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<Key> keys_;
};

/// One point per unique (instance, label) pair with at least one judgment, in
/// instance order then label order. Throws LookupError naming the first instance
/// without an embedding, DomainError ("silhouette undefined") with fewer than
/// two non-empty label clusters.
ClusterPointSet build_points(const Dataset& dataset, const EmbeddingStore& store);

struct PointScore {
  double score = 0.0;
  /// Mean distance to the other members of the own cluster; absent for singletons.
  std::optional<double> a;
  /// Smallest mean distance to the members of another non-empty cluster.
  double b = 0.0;
};

struct SilhouetteOptions {
  /// 0 = all hardware threads. Results do not depend on this value.
  unsigned threads = 1;
  /// Tile edge (points) for the blocked distance computation.
  std::size_t block = 256;
};

/// Silhouette coefficient of every point using Euclidean distance.
///
/// score = (b - a) / max(a, b); singleton clusters and a = b = 0 score 0.
/// Distances come from 64-bit Gram tiles (|x|^2 + |y|^2 - 2 x.y) computed one
/// tile at a time, never as a full P x P matrix. Pairs whose squared distance
/// is tiny relative to their norms are recomputed from coordinate differences
/// to avoid cancellation. Per-cluster sums use Neumaier summation in a fixed
/// column order, so scores are identical for any thread count.
std::vector<PointScore> silhouette_scores(const ClusterPointSet& points, const SilhouetteOptions& options = {});

struct SilhouetteScore {
  std::string instance_id;
  std::string label;
  double score = 0.0;
  std::optional<double> a;
  double b = 0.0;
};

struct SilhouetteAudit {
  /// One entry per (instance, label) point.
  std::vector<SilhouetteScore> points;
  /// Score of every judgment, aligned with Dataset::judgments().
  std::vector<double> judgment_scores;
  /// Point index of every judgment.
  std::vector<std::size_t> judgment_point;
};

/// Judgments sharing an (instance, label) pair share that point's score.
SilhouetteAudit audit_silhouette(const Dataset& dataset, const EmbeddingStore& store,
                                 const SilhouetteOptions& options = {});

}  // namespace annoaudit
