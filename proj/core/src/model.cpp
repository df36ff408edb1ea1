#include "annoaudit/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "annoaudit/error.hpp"

namespace annoaudit {

LabelSet::LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw SchemaError("label set: empty label name");
    if (!index_.emplace(labels_[i], i).second)
      throw SchemaError("label set: duplicate label '" + labels_[i] + "'");
  }
}

LabelSet LabelSet::lexicographic(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return LabelSet(std::move(labels));
}

std::optional<std::size_t> LabelSet::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t LabelSet::index_of(std::string_view label) const {
  if (const auto i = find(label)) return *i;
  throw LookupError("unknown label '" + std::string(label) + "'");
}

std::uint64_t CountVector::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

Dataset::Dataset(LabelSet labels, std::vector<Instance> instances,
                 std::vector<Judgment> judgments)
    : labels_(std::move(labels)), judgments_(std::move(judgments)) {
  std::unordered_map<std::string, std::size_t> all_index;
  all_index.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!all_index.emplace(instances[i].id, i).second)
      throw SchemaError("dataset: duplicate instance '" + instances[i].id + "'");
  }

  std::vector<std::size_t> raw_instance(judgments_.size());
  std::vector<bool> used(instances.size(), false);
  judgment_label_.resize(judgments_.size());
  std::set<std::tuple<std::string_view, std::size_t, std::string_view>> seen;
  for (std::size_t j = 0; j < judgments_.size(); ++j) {
    const Judgment& jd = judgments_[j];
    const auto it = all_index.find(jd.instance_id);
    if (it == all_index.end())
      throw SchemaError("dataset: judgment references unknown instance '" + jd.instance_id + "'");
    const auto label = labels_.find(jd.label);
    if (!label)
      throw SchemaError("dataset: judgment on '" + jd.instance_id + "' uses unknown label '" +
                        jd.label + "'");
    if (!seen.emplace(jd.instance_id, *label, jd.annotator_id).second)
      throw SchemaError("dataset: duplicate judgment (" + jd.instance_id + ", " + jd.label + ", " +
                        jd.annotator_id + ")");
    raw_instance[j] = it->second;
    judgment_label_[j] = *label;
    used[it->second] = true;
  }

  std::vector<std::size_t> remap(instances.size(), 0);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!used[i]) continue;
    remap[i] = instances_.size();
    instance_index_.emplace(instances[i].id, instances_.size());
    instances_.push_back(std::move(instances[i]));
  }
  judgment_instance_.resize(judgments_.size());
  by_instance_.resize(instances_.size());
  for (std::size_t j = 0; j < judgments_.size(); ++j) {
    judgment_instance_[j] = remap[raw_instance[j]];
    by_instance_[judgment_instance_[j]].push_back(j);
  }
}

std::optional<std::size_t> Dataset::find_instance(std::string_view id) const {
  const auto it = instance_index_.find(std::string(id));
  if (it == instance_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Dataset::instance_index(std::string_view id) const {
  if (const auto i = find_instance(id)) return *i;
  throw LookupError("unknown instance '" + std::string(id) + "'");
}

CountVector Dataset::counts(std::size_t instance) const {
  CountVector c(labels_.size());
  for (const std::size_t j : by_instance_.at(instance)) ++c[judgment_label_[j]];
  return c;
}

Dataset Dataset::keep_judgments(const std::vector<bool>& keep) const {
  if (keep.size() != judgments_.size())
    throw ConfigError("keep_judgments: mask size does not match judgment count");
  std::vector<Judgment> kept;
  for (std::size_t j = 0; j < judgments_.size(); ++j)
    if (keep[j]) kept.push_back(judgments_[j]);
  return Dataset(labels_, instances_, std::move(kept));
}

Dataset Dataset::keep_instances(const std::vector<bool>& keep) const {
  if (keep.size() != instances_.size())
    throw ConfigError("keep_instances: mask size does not match instance count");
  std::vector<Instance> inst;
  for (std::size_t i = 0; i < instances_.size(); ++i)
    if (keep[i]) inst.push_back(instances_[i]);
  std::vector<Judgment> kept;
  for (std::size_t j = 0; j < judgments_.size(); ++j)
    if (keep[judgment_instance_[j]]) kept.push_back(judgments_[j]);
  return Dataset(labels_, std::move(inst), std::move(kept));
}

namespace {

std::string where(const AnnotationRecord& r) {
  return r.line > 0 ? "line " + std::to_string(r.line) + ": " : std::string{};
}

}  // namespace

std::vector<Judgment> expand_judgments(std::span<const AnnotationRecord> records,
                                       const LabelSet& labels) {
  std::vector<Judgment> out;
  std::set<std::pair<std::string_view, std::string_view>> pairs;
  for (const AnnotationRecord& r : records) {
    if (!pairs.emplace(r.instance_id, r.annotator_id).second)
      throw SchemaError(where(r) + "duplicate record for (instance '" + r.instance_id +
                        "', annotator '" + r.annotator_id + "')");
    if (r.labels.empty())
      throw SchemaError(where(r) + "record for '" + r.instance_id + "' has no labels");
    std::set<std::string_view> within;
    for (const std::string& label : r.labels) {
      if (!labels.contains(label))
        throw SchemaError(where(r) + "unknown label '" + label + "'");
      if (!within.insert(label).second)
        throw SchemaError(where(r) + "label '" + label + "' repeated within one record");
      out.push_back(Judgment{r.instance_id, label, r.annotator_id});
    }
  }
  return out;
}

Dataset build_dataset(std::span<const AnnotationRecord> records, std::optional<LabelSet> declared) {
  LabelSet labels;
  if (declared) {
    labels = std::move(*declared);
  } else {
    std::vector<std::string> seen;
    for (const AnnotationRecord& r : records) seen.insert(seen.end(), r.labels.begin(), r.labels.end());
    labels = LabelSet::lexicographic(std::move(seen));
  }
  std::vector<Judgment> judgments = expand_judgments(records, labels);

  std::vector<Instance> instances;
  std::unordered_map<std::string, std::size_t> index;
  for (const AnnotationRecord& r : records) {
    const auto [it, inserted] = index.emplace(r.instance_id, instances.size());
    if (inserted) {
      instances.push_back(Instance{r.instance_id, r.text});
    } else if (!instances[it->second].text && r.text) {
      instances[it->second].text = r.text;
    }
  }
  return Dataset(std::move(labels), std::move(instances), std::move(judgments));
}

CountVector label_counts(const Dataset& dataset, std::string_view instance_id) {
  return dataset.counts(dataset.instance_index(instance_id));
}

}  // namespace annoaudit
