#include <doctest.h>

#include <algorithm>
#include <set>

#include "annoaudit/entropy.hpp"
#include "annoaudit/error.hpp"
#include "annoaudit/filter.hpp"
#include "annoaudit/synth.hpp"
#include "fixtures.hpp"

using namespace annoaudit;

namespace {

Dataset small() {
  return fixtures::dataset({{"t1", "a1", {"x"}},
                            {"t1", "a2", {"y"}},
                            {"t2", "a1", {"x"}},
                            {"t2", "a2", {"x"}},
                            {"t3", "a1", {"x"}},
                            {"t3", "a2", {"z"}},
                            {"t4", "a1", {"y"}}});
}

Dataset synthetic() {
  SynthConfig cfg;
  cfg.instances = 300;
  cfg.dim = 6;
  cfg.seed = 3;
  return generate(cfg).dataset;
}

std::set<Judgment> removed_set(const RemovalLog& log) {
  return {log.removed_judgments.begin(), log.removed_judgments.end()};
}

}  // namespace

TEST_CASE("strategy names") {
  for (auto s : {FilterStrategy::Entropy, FilterStrategy::Silhouette, FilterStrategy::RandomInstances,
                 FilterStrategy::RandomJudgments})
    CHECK(parse_strategy(to_string(s)) == s);
  CHECK_THROWS_AS(parse_strategy("loss"), ConfigError);
  CHECK(removes_instances(FilterStrategy::Entropy));
  CHECK_FALSE(removes_instances(FilterStrategy::Silhouette));
}

TEST_CASE("removal count") {
  CHECK(removal_count(0.0, 100) == 0);
  CHECK(removal_count(1.0, 100) == 100);
  CHECK(removal_count(0.29, 100) == 29);
  CHECK(removal_count(0.57, 100) == 57);
  CHECK(removal_count(0.25, 7) == 1);
  CHECK(removal_count(0.1, 3) == 0);
  CHECK_THROWS_AS(removal_count(1.5, 10), ConfigError);
  CHECK_THROWS_AS(removal_count(-0.1, 10), ConfigError);
}

TEST_CASE("entropy filter removes the most ambiguous instances") {
  const Dataset ds = small();
  const auto scores = audit_entropy(ds);
  // t1 and t3 tie at ln 2; the lower id goes first.
  const auto r1 = filter_entropy(ds, scores, 0.25);
  CHECK(r1.log.removed_instances == std::vector<std::string>{"t1"});
  CHECK(r1.dataset.instance_count() == 3);
  CHECK(r1.log.removed_judgments.size() == 2);
  CHECK(r1.log.kept_judgments == 5);

  const auto r2 = filter_entropy(ds, scores, 0.5);
  CHECK(r2.log.removed_instances == std::vector<std::string>{"t1", "t3"});

  const auto none = filter_entropy(ds, scores, 0.0);
  CHECK(none.dataset.judgment_count() == ds.judgment_count());
  CHECK(none.log.removed_instances.empty());

  const auto all = filter_entropy(ds, scores, 1.0);
  CHECK(all.dataset.empty());
  CHECK(all.log.kept_instances == 0);

  std::vector<EntropyScore> wrong(scores.begin(), scores.end() - 1);
  CHECK_THROWS_AS(filter_entropy(ds, wrong, 0.5), ConfigError);
}

TEST_CASE("silhouette filter removes the lowest-scoring judgments") {
  const Dataset ds = small();
  // Scores per judgment in dataset order; ties at -0.5 resolve by (instance, label, annotator).
  const std::vector<double> scores{0.9, -0.5, 0.1, 0.2, -0.5, 0.3, -0.9};
  const auto r = filter_silhouette(ds, scores, 3.0 / 7.0);
  const std::set<Judgment> want{{"t4", "y", "a1"}, {"t1", "y", "a2"}, {"t3", "x", "a1"}};
  CHECK(removed_set(r.log) == want);
  // The log lists removed judgments in dataset order.
  CHECK(r.log.removed_judgments.front() == Judgment{"t1", "y", "a2"});
  CHECK(r.log.removed_judgments.back() == Judgment{"t4", "y", "a1"});
  // t4 lost its only judgment.
  CHECK(r.log.removed_instances == std::vector<std::string>{"t4"});
  CHECK(r.dataset.instance_count() == 3);
  CHECK(r.dataset.judgment_count() == 4);

  CHECK_THROWS_AS(filter_silhouette(ds, std::vector<double>{0.1}, 0.5), ConfigError);
}

TEST_CASE("exact counts and nesting for every strategy") {
  const Dataset ds = synthetic();
  const auto ent = audit_entropy(ds);
  std::vector<double> sil(ds.judgment_count());
  for (std::size_t j = 0; j < sil.size(); ++j) sil[j] = static_cast<double>((j * 7919) % 101) / 50.0 - 1.0;

  const std::vector<double> fractions{0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.9};
  std::set<Judgment> prev[4];
  for (double f : fractions) {
    const FilterResult results[4] = {filter_entropy(ds, ent, f), filter_silhouette(ds, sil, f),
                                     filter_random(ds, f, 11, Granularity::Instances),
                                     filter_random(ds, f, 11, Granularity::Judgments)};
    CHECK(results[0].log.removed_instances.size() == removal_count(f, ds.instance_count()));
    CHECK(results[2].log.removed_instances.size() == removal_count(f, ds.instance_count()));
    CHECK(results[1].log.removed_judgments.size() == removal_count(f, ds.judgment_count()));
    CHECK(results[3].log.removed_judgments.size() == removal_count(f, ds.judgment_count()));
    for (int k = 0; k < 4; ++k) {
      const auto& r = results[k];
      CHECK(r.dataset.judgment_count() + r.log.removed_judgments.size() == ds.judgment_count());
      CHECK(r.log.kept_judgments == r.dataset.judgment_count());
      CHECK(r.log.original_judgments == ds.judgment_count());
      const auto now = removed_set(r.log);
      CHECK(std::includes(now.begin(), now.end(), prev[k].begin(), prev[k].end()));
      prev[k] = now;
    }
  }
}

TEST_CASE("random filters are seeded") {
  const Dataset ds = synthetic();
  const auto a = filter_random(ds, 0.3, 1, Granularity::Judgments);
  const auto b = filter_random(ds, 0.3, 1, Granularity::Judgments);
  const auto c = filter_random(ds, 0.3, 2, Granularity::Judgments);
  CHECK(a.log.removed_judgments == b.log.removed_judgments);
  CHECK(a.log.removed_judgments != c.log.removed_judgments);
  CHECK(a.log.plan.seed == 1);
  CHECK(a.log.plan.strategy == FilterStrategy::RandomJudgments);
}
