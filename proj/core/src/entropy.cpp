#include "annoaudit/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "annoaudit/error.hpp"

namespace annoaudit {

double entropy(const CountVector& counts) {
  std::vector<std::uint64_t> nonzero;
  nonzero.reserve(counts.size());
  for (const std::uint64_t c : counts.values())
    if (c > 0) nonzero.push_back(c);
  if (nonzero.empty()) throw DomainError("entropy: all counts are zero");

  std::sort(nonzero.begin(), nonzero.end());
  if (nonzero.front() == nonzero.back()) return std::log(static_cast<double>(nonzero.size()));

  double total = 0.0;
  for (const std::uint64_t c : nonzero) total += static_cast<double>(c);
  double h = 0.0;
  for (const std::uint64_t c : nonzero) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h;
}

std::vector<EntropyScore> audit_entropy(const Dataset& dataset) {
  std::vector<EntropyScore> scores;
  scores.reserve(dataset.instance_count());
  for (std::size_t i = 0; i < dataset.instance_count(); ++i) {
    const CountVector c = dataset.counts(i);
    scores.push_back({dataset.instances()[i].id, entropy(c), c.total()});
  }
  return scores;
}

}  // namespace annoaudit
