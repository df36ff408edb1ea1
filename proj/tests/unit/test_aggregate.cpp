#include <doctest.h>

#include "annoaudit/aggregate.hpp"
#include "annoaudit/error.hpp"
#include "fixtures.hpp"

using namespace annoaudit;

TEST_CASE("clear majority consumes no draws") {
  Stream s(1);
  const auto m = majority_label(CountVector(std::vector<std::uint64_t>{1, 3, 0}), s);
  CHECK(m.label == 1);
  CHECK(m.count == 3);
  CHECK_FALSE(m.tied);
  CHECK(s.position() == 0);
  CHECK_THROWS_AS(majority_label(CountVector(std::vector<std::uint64_t>{0, 0}), s), DomainError);
}

TEST_CASE("ties consume exactly one draw and pick a tied label") {
  Stream s(2);
  for (int i = 0; i < 200; ++i) {
    const auto m = majority_label(CountVector(std::vector<std::uint64_t>{2, 0, 2, 1, 2}), s);
    CHECK(m.tied);
    CHECK((m.label == 0 || m.label == 2 || m.label == 4));
  }
  CHECK(s.position() == 200);
}

TEST_CASE("two-way tie is fair over seeds") {
  int first = 0;
  const int n = 10000;
  const CountVector c(std::vector<std::uint64_t>{1, 1});
  for (int seed = 0; seed < n; ++seed) {
    Stream s(derive_key(static_cast<std::uint64_t>(seed), "tie-break"));
    if (majority_label(c, s).label == 0) ++first;
  }
  const double frac = static_cast<double>(first) / n;
  CHECK(frac >= 0.47);
  CHECK(frac <= 0.53);
}

TEST_CASE("majority_labels is seeded and ordered") {
  const Dataset ds = fixtures::dataset(
      {{"t1", "a1", {"x"}}, {"t1", "a2", {"y"}}, {"t2", "a1", {"y"}}, {"t3", "a1", {"x"}}, {"t3", "a2", {"y"}}});
  const auto a = majority_labels(ds, 17);
  const auto b = majority_labels(ds, 17);
  REQUIRE(a.size() == 3);
  CHECK(a[1].instance_id == "t2");
  CHECK(a[1].label == ds.label_set().index_of("y"));
  CHECK_FALSE(a[1].tied);
  CHECK(a[0].tied);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].label == b[i].label);

  // Across seeds both labels are chosen for the tied instance.
  bool saw[2] = {false, false};
  for (std::uint64_t seed = 0; seed < 64; ++seed) saw[majority_labels(ds, seed)[0].label] = true;
  CHECK(saw[0]);
  CHECK(saw[1]);
}
