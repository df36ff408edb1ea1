#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "annoaudit/model.hpp"
#include "annoaudit/rng.hpp"

namespace annoaudit {

struct MajorityLabel {
  std::string instance_id;
  /// Index into the dataset's LabelSet.
  std::size_t label = 0;
  std::uint64_t count = 0;
  bool tied = false;
};

/// Argmax of `counts`. Ties consume exactly one `uniform_below(k)` draw to pick
/// among the k tied labels (in label order); untied counts consume nothing.
/// Throws DomainError when all counts are zero.
MajorityLabel majority_label(const CountVector& counts, Stream& ties);

/// Majority label of every instance in canonical order, with ties broken by
/// the stream `derive_key(seed, "tie-break")`.
std::vector<MajorityLabel> majority_labels(const Dataset& dataset, std::uint64_t seed);

}  // namespace annoaudit
