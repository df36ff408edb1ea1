#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "annoaudit/model.hpp"

namespace annoaudit {

/// Single-step label renames (e.g. equality -> fairness).
class LabelMapping {
 public:
  LabelMapping() = default;
  /// Throws SchemaError if a rename target is itself renamed (chained mapping).
  explicit LabelMapping(std::map<std::string, std::string> renames);

  /// Reads a JSON object of "from": "to" pairs.
  static LabelMapping from_file(const std::filesystem::path& path);

  std::string apply(std::string_view label) const;
  bool empty() const noexcept { return renames_.empty(); }
  const std::map<std::string, std::string>& renames() const noexcept { return renames_; }

 private:
  std::map<std::string, std::string> renames_;
};

/// Parses judgment JSON-lines. See README for the schema.
///
/// The mapping is applied to each record before expansion; labels that collide
/// after mapping are merged. An optional first line `{"label_set": [...]}`
/// fixes the vocabulary (post-mapping names) and its order.
Dataset parse_judgments(std::istream& in, const LabelMapping* mapping = nullptr,
                        std::string_view source = "<stream>");
Dataset parse_judgment_file(const std::filesystem::path& path, const LabelMapping* mapping = nullptr);

/// Writes the label_set header and one record per (instance, annotator) group.
void write_judgments(const Dataset& dataset, std::ostream& out);
void write_judgment_file(const Dataset& dataset, const std::filesystem::path& path);

enum class EmbeddingFormat { Jsonl, Binary };

/// "jsonl" or "bin"/"binary"; throws ConfigError otherwise.
EmbeddingFormat parse_embedding_format(std::string_view name);
/// ".bin" selects Binary, anything else Jsonl.
EmbeddingFormat embedding_format_for(const std::filesystem::path& path);

/// Dense float32 vectors keyed by instance id, all of one dimension.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  /// Throws SchemaError on dimension mismatch, duplicate id, or non-finite values.
  void add(std::string id, std::span<const float> vector);

  const std::string& id(std::size_t row) const { return ids_.at(row); }
  std::span<const std::string> ids() const noexcept { return ids_; }
  std::span<const float> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }
  std::optional<std::size_t> find(std::string_view id) const;
  std::optional<std::span<const float>> vector(std::string_view id) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingStore read_embeddings(std::istream& in, EmbeddingFormat format,
                               std::string_view source = "<stream>");
EmbeddingStore parse_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
EmbeddingStore parse_embeddings(const std::filesystem::path& path);

void write_embeddings(const EmbeddingStore& store, std::ostream& out, EmbeddingFormat format);
void write_embeddings(const EmbeddingStore& store, const std::filesystem::path& path,
                      EmbeddingFormat format);

struct AlignmentReport {
  /// In the dataset but absent from the store, in dataset order.
  std::vector<std::string> missing_embeddings;
  /// In the store but absent from the dataset, in store order.
  std::vector<std::string> orphan_embeddings;

  bool empty() const noexcept { return missing_embeddings.empty() && orphan_embeddings.empty(); }
  /// Silhouette auditing only needs every instance to have a vector.
  bool silhouette_ready() const noexcept { return missing_embeddings.empty(); }
};

AlignmentReport validate_alignment(const Dataset& dataset, const EmbeddingStore& store);

}  // namespace annoaudit
