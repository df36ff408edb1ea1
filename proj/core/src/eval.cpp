#include "annoaudit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annoaudit/aggregate.hpp"
#include "annoaudit/entropy.hpp"
#include "annoaudit/error.hpp"
#include "annoaudit/parallel.hpp"
#include "annoaudit/rng.hpp"

namespace annoaudit {

namespace {

bool uses_entropy(FilterStrategy s) { return s == FilterStrategy::Entropy; }
bool uses_silhouette(FilterStrategy s) { return s == FilterStrategy::Silhouette; }

// Scores of `subset` (a dataset obtained by dropping instances or judgments
// from `full`, which preserves relative order) picked out of full-dataset scores.
std::vector<EntropyScore> entropy_for(const Dataset& subset, const Dataset& full, const std::vector<EntropyScore>& all) {
  std::vector<EntropyScore> out;
  out.reserve(subset.instance_count());
  for (const Instance& inst : subset.instances()) out.push_back(all[full.instance_index(inst.id)]);
  return out;
}

std::vector<double> silhouette_for(const Dataset& subset, const Dataset& full, const std::vector<double>& all) {
  std::vector<double> out;
  out.reserve(subset.judgment_count());
  std::size_t f = 0;
  for (const Judgment& j : subset.judgments()) {
    while (full.judgments()[f] != j) ++f;
    out.push_back(all[f++]);
  }
  return out;
}

FilterResult apply_filter(const Dataset& target, const SweepInputs& inputs, FilterStrategy strategy, double fraction,
                          std::uint64_t seed) {
  switch (strategy) {
    case FilterStrategy::Entropy:
      return filter_entropy(target, entropy_for(target, *inputs.dataset, inputs.entropy), fraction);
    case FilterStrategy::Silhouette:
      return filter_silhouette(target, silhouette_for(target, *inputs.dataset, inputs.silhouette), fraction);
    case FilterStrategy::RandomInstances:
      return filter_random(target, fraction, seed, Granularity::Instances);
    case FilterStrategy::RandomJudgments:
      return filter_random(target, fraction, seed, Granularity::Judgments);
  }
  throw ConfigError("unknown strategy");
}

std::vector<std::size_t> labels_of(const std::vector<MajorityLabel>& majority) {
  std::vector<std::size_t> out(majority.size());
  std::transform(majority.begin(), majority.end(), out.begin(), [](const MajorityLabel& m) { return m.label; });
  return out;
}

EvalResult degenerate(EvalResult row, std::string why) {
  row.degenerate = true;
  row.macro_f1 = 0.0;
  row.accuracy = 0.0;
  row.note = std::move(why);
  return row;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_ratio, std::uint64_t seed) {
  if (dataset.instance_count() == 0) throw ConfigError("cannot split an empty dataset");
  if (!(train_ratio >= 0.0 && train_ratio <= 1.0)) throw ConfigError("train ratio must be in [0, 1]");
  const std::size_t m = dataset.instance_count();
  const std::size_t n_train = removal_count(train_ratio, m);

  Stream stream(derive_key(seed, "split"));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[stream.uniform_below(i)]);

  std::vector<bool> in_train(m, false);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = true;
  std::vector<bool> in_test(m);
  std::transform(in_train.begin(), in_train.end(), in_test.begin(), [](bool b) { return !b; });
  return {dataset.keep_instances(in_train), dataset.keep_instances(in_test)};
}

Matrix feature_matrix(const Dataset& dataset, const EmbeddingStore& store) {
  Matrix x(static_cast<Eigen::Index>(dataset.instance_count()), static_cast<Eigen::Index>(store.dim()));
  for (std::size_t i = 0; i < dataset.instance_count(); ++i) {
    const std::string& id = dataset.instances()[i].id;
    const auto v = store.vector(id);
    if (!v) throw LookupError("no embedding for instance '" + id + "'");
    for (std::size_t k = 0; k < store.dim(); ++k)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (*v)[k];
  }
  return x;
}

ConfidenceSummary summarize_confidence(const std::vector<ConfidenceRecord>& records) {
  ConfidenceSummary out;
  std::vector<double> values;
  values.reserve(records.size());
  for (const ConfidenceRecord& r : records) {
    values.push_back(r.confidence);
    const auto bin = static_cast<std::size_t>(std::clamp(r.confidence, 0.0, 1.0) * kConfidenceBins);
    ++out.histogram[std::min(bin, kConfidenceBins - 1)];
  }
  out.mean = mean_confidence(values);
  return out;
}

std::uint64_t run_seed(std::uint64_t master_seed, unsigned seed_index) noexcept {
  return derive_key(master_seed, "run", {seed_index});
}

SweepInputs prepare_sweep(const Dataset& dataset, const EmbeddingStore& store,
                          const std::vector<FilterStrategy>& strategies, unsigned threads) {
  SweepInputs inputs;
  inputs.dataset = &dataset;
  inputs.store = &store;
  const AlignmentReport alignment = validate_alignment(dataset, store);
  if (!alignment.silhouette_ready())
    throw SchemaError("no embedding for instance '" + alignment.missing_embeddings.front() + "' (" +
                      std::to_string(alignment.missing_embeddings.size()) + " missing)");
  if (std::any_of(strategies.begin(), strategies.end(), uses_entropy)) inputs.entropy = audit_entropy(dataset);
  if (std::any_of(strategies.begin(), strategies.end(), uses_silhouette))
    inputs.silhouette = audit_silhouette(dataset, store, {.threads = threads}).judgment_scores;
  return inputs;
}

EvalResult evaluate_cell(const SweepInputs& inputs, FilterStrategy strategy, double fraction, unsigned seed_index,
                         const SweepConfig& config) {
  const Dataset& full = *inputs.dataset;
  EvalResult row;
  row.strategy = strategy;
  row.fraction = fraction;
  row.seed_index = seed_index;
  row.run_seed = run_seed(config.master_seed, seed_index);
  const std::uint64_t filter_seed = derive_key(row.run_seed, "filter", {static_cast<std::uint64_t>(strategy)});
  const std::uint64_t tie_seed = derive_key(row.run_seed, "tie");
  const std::uint64_t split_seed = derive_key(row.run_seed, "split");

  Dataset train_set, test_set;
  std::vector<MajorityLabel> train_majority, test_majority;
  if (config.clean_test) {
    auto [train_full, test_full] = split(full, config.train_ratio, split_seed);
    train_set = apply_filter(train_full, inputs, strategy, fraction, filter_seed).dataset;
    test_set = std::move(test_full);
    train_majority = majority_labels(train_set, tie_seed);
    test_majority = majority_labels(test_set, derive_key(tie_seed, "test"));
  } else {
    const Dataset filtered = apply_filter(full, inputs, strategy, fraction, filter_seed).dataset;
    if (filtered.instance_count() < 2) return degenerate(row, "fewer than two instances after filtering");
    const std::vector<MajorityLabel> majority = majority_labels(filtered, tie_seed);
    std::tie(train_set, test_set) = split(filtered, config.train_ratio, split_seed);
    for (const Instance& inst : train_set.instances()) train_majority.push_back(majority[filtered.instance_index(inst.id)]);
    for (const Instance& inst : test_set.instances()) test_majority.push_back(majority[filtered.instance_index(inst.id)]);
  }
  row.n_train = train_set.instance_count();
  row.n_test = test_set.instance_count();
  if (row.n_train == 0 || row.n_test == 0) return degenerate(row, "empty train or test split");

  const std::size_t labels = full.label_set().size();
  TrainConfig train_config = config.train;
  train_config.seed = derive_key(row.run_seed, "train");
  const std::vector<std::size_t> train_y = labels_of(train_majority);
  const std::vector<std::size_t> test_y = labels_of(test_majority);
  try {
    const TrainResult trained = train(feature_matrix(train_set, *inputs.store), train_y, labels, train_config);
    const Prediction pred = predict(trained.model, feature_matrix(test_set, *inputs.store));
    row.macro_f1 = macro_f1(test_y, pred.labels, labels).value;
    row.accuracy = accuracy(test_y, pred.labels);
    row.confidence = summarize_confidence(trained.confidence);
  } catch (const DomainError& e) {
    return degenerate(row, e.what());
  }
  return row;
}

std::vector<EvalResult> sweep(const Dataset& dataset, const EmbeddingStore& store, const SweepConfig& config) {
  config.train.validate();
  for (const double f : config.fractions) removal_count(f, 0);
  if (config.n_seeds == 0) throw ConfigError("need at least one seed");

  const SweepInputs inputs = prepare_sweep(dataset, store, config.strategies, config.threads);
  struct Cell {
    FilterStrategy strategy;
    double fraction;
    unsigned seed;
  };
  std::vector<Cell> cells;
  for (const FilterStrategy s : config.strategies)
    for (const double f : config.fractions)
      for (unsigned k = 0; k < config.n_seeds; ++k) cells.push_back({s, f, k});

  std::vector<EvalResult> results(cells.size());
  parallel_for(cells.size(), config.threads, [&](std::size_t c) {
    results[c] = evaluate_cell(inputs, cells[c].strategy, cells[c].fraction, cells[c].seed, config);
  });
  return results;
}

}  // namespace annoaudit
