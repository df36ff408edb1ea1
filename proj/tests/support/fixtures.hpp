#pragma once

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "annoaudit/model.hpp"

namespace fixtures {

struct Rec {
  std::string instance;
  std::string annotator;
  std::vector<std::string> labels;
};

inline annoaudit::Dataset dataset(std::initializer_list<Rec> recs,
                                  std::optional<std::vector<std::string>> label_set = std::nullopt) {
  std::vector<annoaudit::AnnotationRecord> records;
  for (const Rec& r : recs) records.push_back({r.instance, r.annotator, r.labels, std::nullopt, 0});
  std::optional<annoaudit::LabelSet> declared;
  if (label_set) declared = annoaudit::LabelSet(*label_set);
  return annoaudit::build_dataset(records, std::move(declared));
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("annoaudit_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
