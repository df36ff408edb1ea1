#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "annoaudit/model.hpp"

namespace annoaudit {

/// Shannon entropy (nats) of the distribution p_j = c_j / sum(c).
///
/// Zero counts contribute nothing. Nonzero counts are summed in sorted order so
/// the result is bit-identical under any label permutation; when all nonzero
/// counts are equal the closed form ln(k) is returned, so unanimous inputs give
/// exactly 0 and uniform inputs exactly ln(N).
/// Throws DomainError when all counts are zero.
double entropy(const CountVector& counts);

struct EntropyScore {
  std::string instance_id;
  double entropy = 0.0;
  std::uint64_t total_judgments = 0;
};

/// One score per instance, in instance order.
std::vector<EntropyScore> audit_entropy(const Dataset& dataset);

}  // namespace annoaudit
