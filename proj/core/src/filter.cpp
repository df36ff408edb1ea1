#include "annoaudit/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "annoaudit/error.hpp"
#include "annoaudit/rng.hpp"

namespace annoaudit {

namespace {

void check_fraction(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw ConfigError("fraction must be in [0, 1], got " + std::to_string(fraction));
}

FilterResult finish(const Dataset& original, Dataset refined, FilterPlan plan, std::vector<Judgment> removed) {
  RemovalLog log;
  log.plan = plan;
  log.original_instances = original.instance_count();
  log.original_judgments = original.judgment_count();
  for (const Instance& inst : original.instances())
    if (!refined.find_instance(inst.id)) log.removed_instances.push_back(inst.id);
  log.removed_judgments = std::move(removed);
  log.kept_instances = refined.instance_count();
  log.kept_judgments = refined.judgment_count();
  return {std::move(refined), std::move(log)};
}

FilterResult drop_judgments(const Dataset& dataset, std::span<const std::size_t> removed, FilterPlan plan) {
  std::vector<bool> keep(dataset.judgment_count(), true);
  for (const std::size_t j : removed) keep[j] = false;
  std::vector<Judgment> log;
  for (std::size_t j = 0; j < dataset.judgment_count(); ++j)
    if (!keep[j]) log.push_back(dataset.judgments()[j]);
  return finish(dataset, dataset.keep_judgments(keep), plan, std::move(log));
}

FilterResult drop_instances(const Dataset& dataset, std::span<const std::size_t> removed, FilterPlan plan) {
  std::vector<bool> keep(dataset.instance_count(), true);
  for (const std::size_t i : removed) keep[i] = false;
  std::vector<Judgment> log;
  for (std::size_t j = 0; j < dataset.judgment_count(); ++j)
    if (!keep[dataset.judgment_instance(j)]) log.push_back(dataset.judgments()[j]);
  return finish(dataset, dataset.keep_instances(keep), plan, std::move(log));
}

}  // namespace

std::string_view to_string(FilterStrategy strategy) noexcept {
  switch (strategy) {
    case FilterStrategy::Entropy: return "entropy";
    case FilterStrategy::Silhouette: return "silhouette";
    case FilterStrategy::RandomInstances: return "random_instances";
    case FilterStrategy::RandomJudgments: return "random_judgments";
  }
  return "unknown";
}

FilterStrategy parse_strategy(std::string_view name) {
  for (const auto s : {FilterStrategy::Entropy, FilterStrategy::Silhouette, FilterStrategy::RandomInstances,
                       FilterStrategy::RandomJudgments})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown filter strategy '" + std::string(name) + "'");
}

bool removes_instances(FilterStrategy strategy) noexcept {
  return strategy == FilterStrategy::Entropy || strategy == FilterStrategy::RandomInstances;
}

std::size_t removal_count(double fraction, std::size_t population) {
  check_fraction(fraction);
  const double exact = fraction * static_cast<double>(population);
  auto k = static_cast<std::size_t>(std::floor(exact));
  if (k < population && static_cast<double>(k + 1) - exact < 1e-9) ++k;
  return k;
}

FilterResult filter_entropy(const Dataset& dataset, std::span<const EntropyScore> scores, double fraction) {
  const std::size_t k = removal_count(fraction, dataset.instance_count());
  if (scores.size() != dataset.instance_count())
    throw ConfigError("filter_entropy: scores do not cover all instances");
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i].instance_id != dataset.instances()[i].id)
      throw ConfigError("filter_entropy: scores are not aligned with instances at '" + scores[i].instance_id + "'");

  std::vector<std::size_t> order(dataset.instance_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (scores[x].entropy != scores[y].entropy) return scores[x].entropy > scores[y].entropy;
    return scores[x].instance_id < scores[y].instance_id;
  });
  order.resize(k);
  return drop_instances(dataset, order, {FilterStrategy::Entropy, fraction, 0});
}

FilterResult filter_silhouette(const Dataset& dataset, std::span<const double> judgment_scores, double fraction) {
  const std::size_t k = removal_count(fraction, dataset.judgment_count());
  if (judgment_scores.size() != dataset.judgment_count())
    throw ConfigError("filter_silhouette: scores do not cover all judgments");

  const auto judgments = dataset.judgments();
  std::vector<std::size_t> order(dataset.judgment_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (judgment_scores[x] != judgment_scores[y]) return judgment_scores[x] < judgment_scores[y];
    return std::tie(judgments[x].instance_id, judgments[x].label, judgments[x].annotator_id) <
           std::tie(judgments[y].instance_id, judgments[y].label, judgments[y].annotator_id);
  });
  order.resize(k);
  return drop_judgments(dataset, order, {FilterStrategy::Silhouette, fraction, 0});
}

FilterResult filter_random(const Dataset& dataset, double fraction, std::uint64_t seed, Granularity granularity) {
  const bool by_instance = granularity == Granularity::Instances;
  const std::size_t population = by_instance ? dataset.instance_count() : dataset.judgment_count();
  const std::size_t k = removal_count(fraction, population);

  Stream stream(derive_key(seed, "filter-random", {by_instance ? 0u : 1u}));
  std::vector<std::size_t> order(population);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + stream.uniform_below(population - i);
    std::swap(order[i], order[j]);
  }
  order.resize(k);

  const FilterPlan plan{by_instance ? FilterStrategy::RandomInstances : FilterStrategy::RandomJudgments, fraction,
                        seed};
  return by_instance ? drop_instances(dataset, order, plan) : drop_judgments(dataset, order, plan);
}

}  // namespace annoaudit
