#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "annoaudit/error.hpp"
#include "annoaudit/ingest.hpp"
#include "fixtures.hpp"

using namespace annoaudit;

namespace {

Dataset parse(const std::string& text, const LabelMapping* mapping = nullptr) {
  std::istringstream in(text);
  return parse_judgments(in, mapping, "mem");
}

EmbeddingStore random_store(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> nd(0.0f, 10.0f);
  EmbeddingStore store(dim);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : v) x = nd(rng);
    store.add("id_" + std::to_string(i), v);
  }
  // Values that stress a textual round trip.
  std::vector<float> edge(dim, 0.0f);
  edge[0] = std::numeric_limits<float>::denorm_min();
  if (dim > 1) edge[1] = std::numeric_limits<float>::max();
  if (dim > 2) edge[2] = -0.0f;
  if (dim > 3) edge[3] = 0.1f;
  store.add("edge", edge);
  return store;
}

bool bit_equal(const EmbeddingStore& a, const EmbeddingStore& b) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a.id(r) != b.id(r)) return false;
    const auto x = a.row(r);
    const auto y = b.row(r);
    if (std::memcmp(x.data(), y.data(), x.size_bytes()) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("judgment lines") {
  const Dataset ds = parse(
      "{\"instance_id\":\"t1\",\"annotator_id\":\"a1\",\"labels\":[\"harm\",\"cheating\"],\"text\":\"hello\"}\n"
      "\n"
      "{\"instance_id\":\"t1\",\"annotator_id\":\"a2\",\"labels\":[\"harm\"]}\n");
  CHECK(ds.instance_count() == 1);
  CHECK(ds.judgment_count() == 3);
  CHECK(ds.instances()[0].text == std::optional<std::string>("hello"));
  CHECK(ds.label_set().names() == std::vector<std::string>{"cheating", "harm"});
}

TEST_CASE("declared label set fixes order") {
  const Dataset ds = parse(
      "{\"label_set\":[\"harm\",\"cheating\",\"care\"]}\n"
      "{\"instance_id\":\"t1\",\"annotator_id\":\"a1\",\"labels\":[\"cheating\"]}\n");
  CHECK(ds.label_set().names() == std::vector<std::string>{"harm", "cheating", "care"});
  CHECK_THROWS_AS(parse("{\"label_set\":[\"harm\"]}\n"
                        "{\"instance_id\":\"t1\",\"annotator_id\":\"a1\",\"labels\":[\"care\"]}\n"),
                  SchemaError);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_WITH_AS(parse("{\"instance_id\":\"t1\",\n"), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_AS(parse("{\"instance_id\":\"t1\",\"labels\":[\"x\"]}\n"), ParseError);
  CHECK_THROWS_AS(parse("{\"instance_id\":\"t1\",\"annotator_id\":\"a\",\"labels\":[]}\n"), ParseError);
  CHECK_THROWS_AS(parse("{\"instance_id\":\"t1\",\"annotator_id\":\"a\",\"labels\":\"x\"}\n"), ParseError);
  CHECK_THROWS_AS(parse("{\"instance_id\":\"t1\",\"annotator_id\":\"a\",\"labels\":[\"x\",\"x\"]}\n"), SchemaError);
  CHECK_THROWS_AS(parse("[1,2]\n"), ParseError);
}

TEST_CASE("label mapping") {
  const LabelMapping m({{"equality", "fairness"}, {"proportionality", "fairness"}});
  CHECK(m.apply("equality") == "fairness");
  CHECK(m.apply("care") == "care");
  CHECK_THROWS_AS(LabelMapping({{"a", "b"}, {"b", "c"}}), SchemaError);

  // Labels that collide after renaming become one judgment.
  const Dataset ds =
      parse("{\"instance_id\":\"t1\",\"annotator_id\":\"a1\",\"labels\":[\"equality\",\"proportionality\"]}\n", &m);
  CHECK(ds.judgment_count() == 1);
  CHECK(ds.judgments()[0].label == "fairness");
}

TEST_CASE("judgment file round trip") {
  fixtures::TempDir dir("ingest_rt");
  const Dataset ds = parse(
      "{\"label_set\":[\"z\",\"y\",\"x\"]}\n"
      "{\"instance_id\":\"t1\",\"annotator_id\":\"a1\",\"labels\":[\"x\",\"y\"],\"text\":\"q\\\"uote\"}\n"
      "{\"instance_id\":\"t2\",\"annotator_id\":\"a1\",\"labels\":[\"z\"]}\n"
      "{\"instance_id\":\"t1\",\"annotator_id\":\"a2\",\"labels\":[\"x\"]}\n");
  write_judgment_file(ds, dir / "j.jsonl");
  const Dataset back = parse_judgment_file(dir / "j.jsonl");
  CHECK(back.label_set() == ds.label_set());
  // Records are regrouped by instance on write, so compare as sets.
  std::vector<Judgment> got(back.judgments().begin(), back.judgments().end());
  std::vector<Judgment> want(ds.judgments().begin(), ds.judgments().end());
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  CHECK(got == want);
  CHECK(back.instances()[0].text == ds.instances()[0].text);

  std::ostringstream a, b;
  write_judgments(ds, a);
  write_judgments(back, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("embedding round trips are bit-exact") {
  fixtures::TempDir dir("ingest_emb");
  const EmbeddingStore store = random_store(40, 7, 5);
  for (EmbeddingFormat f : {EmbeddingFormat::Jsonl, EmbeddingFormat::Binary}) {
    const auto path = dir / (f == EmbeddingFormat::Binary ? "e.bin" : "e.jsonl");
    write_embeddings(store, path, f);
    CHECK(embedding_format_for(path) == f);
    CHECK(bit_equal(parse_embeddings(path), store));
  }
}

TEST_CASE("embedding validation") {
  EmbeddingStore s(3);
  const std::vector<float> ok{1, 2, 3};
  s.add("a", ok);
  CHECK_THROWS_AS(s.add("a", ok), SchemaError);
  CHECK_THROWS_AS(s.add("b", std::vector<float>{1, 2}), SchemaError);
  CHECK_THROWS_AS(s.add("c", std::vector<float>{1, std::nanf(""), 3}), SchemaError);
  CHECK(s.find("a") == std::optional<std::size_t>(0));
  CHECK_FALSE(s.vector("zz").has_value());

  auto read_jsonl = [](const std::string& text) {
    std::istringstream in(text);
    return read_embeddings(in, EmbeddingFormat::Jsonl, "mem");
  };
  CHECK_THROWS_AS(read_jsonl("{\"instance_id\":\"a\",\"vector\":[1,2]}\n{\"instance_id\":\"b\",\"vector\":[1]}\n"),
                  SchemaError);
  CHECK_THROWS_AS(read_jsonl("{\"instance_id\":\"a\",\"vector\":[1,\"x\"]}\n"), ParseError);
  CHECK_THROWS_AS(read_jsonl("not json\n"), ParseError);

  // Binary: bad magic and truncation.
  std::ostringstream bin;
  write_embeddings(s, bin, EmbeddingFormat::Binary);
  std::string bytes = bin.str();
  {
    std::istringstream in(bytes.substr(0, bytes.size() - 2));
    CHECK_THROWS_AS(read_embeddings(in, EmbeddingFormat::Binary), ParseError);
  }
  {
    std::string bad = bytes;
    bad[0] = 'X';
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_embeddings(in, EmbeddingFormat::Binary), ParseError);
  }
  {
    std::istringstream in(bytes + "junk");
    CHECK_THROWS_AS(read_embeddings(in, EmbeddingFormat::Binary), ParseError);
  }
  CHECK_THROWS_AS(parse_embedding_format("npy"), ConfigError);
  CHECK(parse_embedding_format("bin") == EmbeddingFormat::Binary);
}

TEST_CASE("alignment report") {
  const Dataset ds = fixtures::dataset({{"t1", "a", {"x"}}, {"t2", "a", {"y"}}, {"t3", "a", {"x"}}});
  EmbeddingStore s(2);
  s.add("t3", std::vector<float>{0, 0});
  s.add("zz", std::vector<float>{0, 0});
  s.add("t1", std::vector<float>{0, 0});
  const auto rep = validate_alignment(ds, s);
  CHECK(rep.missing_embeddings == std::vector<std::string>{"t2"});
  CHECK(rep.orphan_embeddings == std::vector<std::string>{"zz"});
  CHECK_FALSE(rep.silhouette_ready());
  s.add("t2", std::vector<float>{1, 1});
  CHECK(validate_alignment(ds, s).silhouette_ready());
}
