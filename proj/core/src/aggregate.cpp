#include "annoaudit/aggregate.hpp"

#include "annoaudit/error.hpp"

namespace annoaudit {

MajorityLabel majority_label(const CountVector& counts, Stream& ties) {
  std::uint64_t best = 0;
  for (const std::uint64_t c : counts.values()) best = std::max(best, c);
  if (best == 0) throw DomainError("majority vote: all counts are zero");

  std::vector<std::size_t> winners;
  for (std::size_t l = 0; l < counts.size(); ++l)
    if (counts[l] == best) winners.push_back(l);

  MajorityLabel out;
  out.count = best;
  out.tied = winners.size() > 1;
  out.label = out.tied ? winners[ties.uniform_below(winners.size())] : winners.front();
  return out;
}

std::vector<MajorityLabel> majority_labels(const Dataset& dataset, std::uint64_t seed) {
  Stream ties(derive_key(seed, "tie-break"));
  std::vector<MajorityLabel> out;
  out.reserve(dataset.instance_count());
  for (std::size_t i = 0; i < dataset.instance_count(); ++i) {
    MajorityLabel m = majority_label(dataset.counts(i), ties);
    m.instance_id = dataset.instances()[i].id;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace annoaudit
