#include "annoaudit/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "annoaudit/error.hpp"
#include "annoaudit/parallel.hpp"

namespace annoaudit {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Below this ratio d^2 / (|x|^2 + |y|^2) the Gram route loses too many digits.
constexpr double kCancellationRatio = 1e-3;

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + comp; }
};

double direct_distance(std::span<const float> x, std::span<const float> y) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = static_cast<double>(x[k]) - static_cast<double>(y[k]);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

ClusterPointSet::ClusterPointSet(std::size_t dim, std::vector<float> coords, std::vector<std::size_t> cluster_of,
                                 std::size_t cluster_count, std::vector<Key> keys)
    : dim_(dim), coords_(std::move(coords)), cluster_of_(std::move(cluster_of)), members_(cluster_count),
      keys_(std::move(keys)) {
  if (dim_ == 0) throw ConfigError("point set: dimension must be positive");
  if (coords_.size() != cluster_of_.size() * dim_)
    throw ConfigError("point set: coordinate count does not match points x dim");
  if (!keys_.empty() && keys_.size() != cluster_of_.size())
    throw ConfigError("point set: key count does not match point count");
  for (std::size_t p = 0; p < cluster_of_.size(); ++p) {
    if (cluster_of_[p] >= cluster_count) throw ConfigError("point set: cluster index out of range");
    members_[cluster_of_[p]].push_back(p);
  }
  const auto non_empty = std::count_if(members_.begin(), members_.end(), [](const auto& m) { return !m.empty(); });
  if (non_empty < 2) throw DomainError("silhouette undefined: fewer than two non-empty clusters");
}

ClusterPointSet build_points(const Dataset& dataset, const EmbeddingStore& store) {
  const std::size_t labels = dataset.label_set().size();
  std::vector<float> coords;
  std::vector<std::size_t> cluster_of;
  std::vector<ClusterPointSet::Key> keys;
  std::vector<bool> present(labels);
  for (std::size_t i = 0; i < dataset.instance_count(); ++i) {
    const std::string& id = dataset.instances()[i].id;
    const auto vec = store.vector(id);
    if (!vec) throw LookupError("no embedding for instance '" + id + "'");
    std::fill(present.begin(), present.end(), false);
    for (const std::size_t j : dataset.judgments_of(i)) present[dataset.judgment_label(j)] = true;
    for (std::size_t l = 0; l < labels; ++l) {
      if (!present[l]) continue;
      coords.insert(coords.end(), vec->begin(), vec->end());
      cluster_of.push_back(l);
      keys.push_back({i, l});
    }
  }
  return ClusterPointSet(store.dim(), std::move(coords), std::move(cluster_of), labels, std::move(keys));
}

std::vector<PointScore> silhouette_scores(const ClusterPointSet& points, const SilhouetteOptions& options) {
  const std::size_t n = points.size();
  const std::size_t dim = points.dim();
  const std::size_t clusters = points.cluster_count();
  const std::size_t block = std::max<std::size_t>(1, options.block);

  // Distances are translation invariant; centering keeps the Gram terms small.
  RowMatrix x(n, dim);
  for (std::size_t p = 0; p < n; ++p) {
    const auto v = points.point(p);
    for (std::size_t k = 0; k < dim; ++k) x(p, k) = v[k];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::VectorXd sq = x.rowwise().squaredNorm();

  std::vector<double> cluster_size(clusters);
  for (std::size_t c = 0; c < clusters; ++c) cluster_size[c] = static_cast<double>(points.members(c).size());

  std::vector<PointScore> scores(n);
  const std::size_t blocks = (n + block - 1) / block;

  parallel_for(blocks, options.threads, [&](std::size_t ib) {
    const std::size_t i0 = ib * block;
    const std::size_t bi = std::min(block, n - i0);
    std::vector<Neumaier> totals(bi * clusters);
    std::vector<double> tile_sums(bi * clusters);
    Eigen::MatrixXd gram(bi, block);

    for (std::size_t j0 = 0; j0 < n; j0 += block) {
      const std::size_t bj = std::min(block, n - j0);
      gram.leftCols(bj).noalias() = x.middleRows(i0, bi) * x.middleRows(j0, bj).transpose();
      std::fill(tile_sums.begin(), tile_sums.end(), 0.0);
      for (std::size_t j = 0; j < bj; ++j) {
        const std::size_t q = j0 + j;
        const std::size_t cq = points.cluster_of(q);
        for (std::size_t i = 0; i < bi; ++i) {
          const std::size_t p = i0 + i;
          if (p == q) continue;
          const double norms = sq[p] + sq[q];
          const double d2 = norms - 2.0 * gram(i, j);
          const double d = d2 > kCancellationRatio * norms ? std::sqrt(d2)
                                                           : direct_distance(points.point(p), points.point(q));
          tile_sums[i * clusters + cq] += d;
        }
      }
      for (std::size_t k = 0; k < bi * clusters; ++k) totals[k].add(tile_sums[k]);
    }

    for (std::size_t i = 0; i < bi; ++i) {
      const std::size_t p = i0 + i;
      const std::size_t own = points.cluster_of(p);
      PointScore& out = scores[p];
      out.b = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < clusters; ++c) {
        if (c == own || cluster_size[c] == 0) continue;
        out.b = std::min(out.b, totals[i * clusters + c].value() / cluster_size[c]);
      }
      if (cluster_size[own] < 2) {
        out.score = 0.0;
        continue;
      }
      const double a = totals[i * clusters + own].value() / (cluster_size[own] - 1);
      out.a = a;
      const double denom = std::max(a, out.b);
      out.score = denom > 0.0 ? (out.b - a) / denom : 0.0;
    }
  });
  return scores;
}

SilhouetteAudit audit_silhouette(const Dataset& dataset, const EmbeddingStore& store,
                                 const SilhouetteOptions& options) {
  const ClusterPointSet points = build_points(dataset, store);
  const std::vector<PointScore> raw = silhouette_scores(points, options);

  SilhouetteAudit audit;
  audit.points.reserve(raw.size());
  // Points are ordered by instance then label, so a point's index is found by
  // scanning from the first point of its instance.
  std::vector<std::size_t> first_point(dataset.instance_count() + 1, raw.size());
  for (std::size_t p = raw.size(); p-- > 0;) first_point[points.keys()[p].instance] = p;
  for (std::size_t p = 0; p < raw.size(); ++p) {
    const auto key = points.keys()[p];
    audit.points.push_back({dataset.instances()[key.instance].id, dataset.label_set().name(key.label),
                            raw[p].score, raw[p].a, raw[p].b});
  }
  audit.judgment_scores.resize(dataset.judgment_count());
  audit.judgment_point.resize(dataset.judgment_count());
  for (std::size_t j = 0; j < dataset.judgment_count(); ++j) {
    const std::size_t inst = dataset.judgment_instance(j);
    const std::size_t label = dataset.judgment_label(j);
    std::size_t p = first_point[inst];
    while (points.keys()[p].label != label) ++p;
    audit.judgment_point[j] = p;
    audit.judgment_scores[j] = raw[p].score;
  }
  return audit;
}

}  // namespace annoaudit
