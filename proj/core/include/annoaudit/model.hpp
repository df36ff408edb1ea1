#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace annoaudit {

/// Ordered vocabulary of label names.
class LabelSet {
 public:
  LabelSet() = default;

  /// Keeps the given order. Throws SchemaError on duplicates or empty names.
  explicit LabelSet(std::vector<std::string> labels);

  /// Sorted, de-duplicated vocabulary.
  static LabelSet lexicographic(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::string& name(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& names() const noexcept { return labels_; }

  std::optional<std::size_t> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }
  /// Throws LookupError for unknown labels.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const LabelSet& a, const LabelSet& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One annotator's (possibly multi-label) annotation of one instance.
struct AnnotationRecord {
  std::string instance_id;
  std::string annotator_id;
  std::vector<std::string> labels;
  std::optional<std::string> text;
  /// 1-based source line, 0 when not read from a file.
  std::size_t line = 0;
};

/// The atomic (instance, label, annotator) annotation unit.
struct Judgment {
  std::string instance_id;
  std::string label;
  std::string annotator_id;

  friend auto operator<=>(const Judgment&, const Judgment&) = default;
  friend bool operator==(const Judgment&, const Judgment&) = default;
};

struct Instance {
  std::string id;
  std::optional<std::string> text;
};

/// Per-label annotator tallies for one instance, aligned to LabelSet order.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::size_t labels) : counts_(labels, 0) {}
  explicit CountVector(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {}

  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts_[i]; }
  std::uint64_t& operator[](std::size_t i) { return counts_[i]; }
  std::span<const std::uint64_t> values() const noexcept { return counts_; }
  std::uint64_t total() const noexcept;

  friend bool operator==(const CountVector&, const CountVector&) = default;

 private:
  std::vector<std::uint64_t> counts_;
};

/// Immutable annotated dataset.
///
/// Instances keep insertion order (the canonical order used by every seeded
/// operation). Instances without judgments are dropped on construction.
class Dataset {
 public:
  Dataset() = default;

  /// Validates that every judgment references a known instance and label and
  /// that (instance, label, annotator) triples are unique.
  Dataset(LabelSet labels, std::vector<Instance> instances, std::vector<Judgment> judgments);

  const LabelSet& label_set() const noexcept { return labels_; }
  std::span<const Instance> instances() const noexcept { return instances_; }
  std::span<const Judgment> judgments() const noexcept { return judgments_; }
  std::size_t instance_count() const noexcept { return instances_.size(); }
  std::size_t judgment_count() const noexcept { return judgments_.size(); }
  bool empty() const noexcept { return judgments_.empty(); }

  std::optional<std::size_t> find_instance(std::string_view id) const;
  /// Throws LookupError.
  std::size_t instance_index(std::string_view id) const;

  /// Instance / label index of judgment `j`.
  std::size_t judgment_instance(std::size_t j) const { return judgment_instance_[j]; }
  std::size_t judgment_label(std::size_t j) const { return judgment_label_[j]; }
  /// Judgment indices of instance `i`, in judgment order.
  std::span<const std::size_t> judgments_of(std::size_t i) const { return by_instance_[i]; }

  CountVector counts(std::size_t instance) const;

  /// Dataset restricted to judgments with keep[j] == true.
  Dataset keep_judgments(const std::vector<bool>& keep) const;
  /// Dataset restricted to instances with keep[i] == true (and their judgments).
  Dataset keep_instances(const std::vector<bool>& keep) const;

 private:
  LabelSet labels_;
  std::vector<Instance> instances_;
  std::vector<Judgment> judgments_;
  std::unordered_map<std::string, std::size_t> instance_index_;
  std::vector<std::size_t> judgment_instance_;
  std::vector<std::size_t> judgment_label_;
  std::vector<std::vector<std::size_t>> by_instance_;
};

/// One Judgment per (record, label), in record order then label order.
/// Throws SchemaError on duplicate (instance, annotator) records, duplicate
/// labels inside a record, empty label lists, or labels outside `labels`.
std::vector<Judgment> expand_judgments(std::span<const AnnotationRecord> records,
                                       const LabelSet& labels);

/// Builds a dataset from records. Without `declared`, the label set is the
/// lexicographically ordered set of labels that occur.
Dataset build_dataset(std::span<const AnnotationRecord> records,
                      std::optional<LabelSet> declared = std::nullopt);

/// Throws LookupError for an unknown instance.
CountVector label_counts(const Dataset& dataset, std::string_view instance_id);

}  // namespace annoaudit
