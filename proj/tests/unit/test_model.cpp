#include <doctest.h>

#include <algorithm>
#include <random>

#include "annoaudit/error.hpp"
#include "annoaudit/model.hpp"
#include "fixtures.hpp"

using namespace annoaudit;

TEST_CASE("label set keeps order and rejects duplicates") {
  const LabelSet ls({"harm", "care", "fairness"});
  CHECK(ls.index_of("care") == 1);
  CHECK_FALSE(ls.contains("loyalty"));
  CHECK_THROWS_AS(ls.index_of("loyalty"), LookupError);
  CHECK_THROWS_AS(LabelSet({"a", "b", "a"}), SchemaError);
  CHECK(LabelSet::lexicographic({"harm", "care", "harm"}).names() == std::vector<std::string>{"care", "harm"});
}

TEST_CASE("expand_judgments") {
  const LabelSet ls = LabelSet::lexicographic({"harm", "cheating", "care"});

  SUBCASE("multi-label record expands in label order") {
    const std::vector<AnnotationRecord> recs{{"t1", "a1", {"harm", "cheating"}, std::nullopt, 1}};
    const auto js = expand_judgments(recs, ls);
    REQUIRE(js.size() == 2);
    CHECK(js[0] == Judgment{"t1", "harm", "a1"});
    CHECK(js[1] == Judgment{"t1", "cheating", "a1"});
  }
  SUBCASE("singleton") {
    const std::vector<AnnotationRecord> recs{{"t1", "a1", {"care"}, std::nullopt, 1}};
    CHECK(expand_judgments(recs, ls) == std::vector<Judgment>{{"t1", "care", "a1"}});
  }
  SUBCASE("distinct annotators are kept") {
    const std::vector<AnnotationRecord> recs{{"t1", "a1", {"harm"}, std::nullopt, 1},
                                             {"t1", "a2", {"harm"}, std::nullopt, 2}};
    const auto js = expand_judgments(recs, ls);
    REQUIRE(js.size() == 2);
    CHECK(js[0].annotator_id == "a1");
    CHECK(js[1].annotator_id == "a2");
  }
  SUBCASE("duplicate (instance, annotator) names the pair") {
    const std::vector<AnnotationRecord> recs{{"t1", "a1", {"harm"}, std::nullopt, 1},
                                             {"t1", "a1", {"care"}, std::nullopt, 2}};
    CHECK_THROWS_WITH_AS(expand_judgments(recs, ls), doctest::Contains("instance 't1', annotator 'a1'"), SchemaError);
  }
  SUBCASE("unknown label names label and line") {
    const std::vector<AnnotationRecord> recs{{"t1", "a1", {"loyalty"}, std::nullopt, 7}};
    try {
      expand_judgments(recs, ls);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("loyalty") != std::string::npos);
      CHECK(msg.find("line 7") != std::string::npos);
    }
  }
}

TEST_CASE("expansion count equals the sum of record label counts") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> names{"a", "b", "c", "d", "e"};
  const LabelSet ls(names);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AnnotationRecord> recs;
    std::size_t expected = 0;
    for (int r = 0; r < 20; ++r) {
      std::vector<std::string> labels = names;
      std::shuffle(labels.begin(), labels.end(), rng);
      labels.resize(1 + rng() % names.size());
      expected += labels.size();
      recs.push_back({"t" + std::to_string(r % 7), "a" + std::to_string(r), labels, std::nullopt, 0});
    }
    CHECK(expand_judgments(recs, ls).size() == expected);
    const Dataset ds = build_dataset(recs, ls);
    for (std::size_t i = 0; i < ds.instance_count(); ++i) CHECK(ds.counts(i).total() == ds.judgments_of(i).size());
  }
}

TEST_CASE("label_counts") {
  // Six labels on one instance: harm, cheating, betrayal, non-moral by two annotators each,
  // authority and subversion by one each.
  const Dataset ds = fixtures::dataset({{"t1", "a1", {"harm", "cheating", "betrayal", "non-moral"}},
                                        {"t1", "a2", {"harm", "cheating", "betrayal", "non-moral", "authority"}},
                                        {"t1", "a3", {"subversion"}},
                                        {"t2", "a1", {"care"}}},
                                       std::vector<std::string>{"harm", "cheating", "betrayal", "non-moral",
                                                                "authority", "subversion", "care", "purity"});
  CHECK(label_counts(ds, "t1") == CountVector(std::vector<std::uint64_t>{2, 2, 2, 2, 1, 1, 0, 0}));
  CHECK(label_counts(ds, "t2") == CountVector(std::vector<std::uint64_t>{0, 0, 0, 0, 0, 0, 1, 0}));
  CHECK_THROWS_AS(label_counts(ds, "nope"), LookupError);
}

TEST_CASE("dataset invariants") {
  const LabelSet ls({"x", "y"});
  SUBCASE("instances without judgments are dropped") {
    const Dataset ds(ls, {{"t1", std::nullopt}, {"t2", std::nullopt}}, {{"t2", "x", "a"}});
    CHECK(ds.instance_count() == 1);
    CHECK(ds.instances()[0].id == "t2");
  }
  SUBCASE("unknown instance or label rejected") {
    CHECK_THROWS_AS(Dataset(ls, {{"t1", std::nullopt}}, {{"t9", "x", "a"}}), SchemaError);
    CHECK_THROWS_AS(Dataset(ls, {{"t1", std::nullopt}}, {{"t1", "z", "a"}}), SchemaError);
  }
  SUBCASE("duplicate triple rejected") {
    CHECK_THROWS_AS(Dataset(ls, {{"t1", std::nullopt}}, {{"t1", "x", "a"}, {"t1", "x", "a"}}), SchemaError);
  }
  SUBCASE("subsets keep order and drop emptied instances") {
    const Dataset ds(ls, {{"t1", std::nullopt}, {"t2", std::nullopt}},
                     {{"t1", "x", "a"}, {"t2", "y", "a"}, {"t1", "y", "b"}});
    const Dataset sub = ds.keep_judgments({true, false, true});
    CHECK(sub.instance_count() == 1);
    CHECK(sub.judgment_count() == 2);
    CHECK(sub.label_set() == ds.label_set());
    const Dataset only_t2 = ds.keep_instances({false, true});
    CHECK(only_t2.judgments().size() == 1);
    CHECK(only_t2.judgments()[0] == Judgment{"t2", "y", "a"});
  }
}
