#include <doctest.h>

#include <cmath>

#include "annoaudit/entropy.hpp"
#include "annoaudit/error.hpp"
#include "annoaudit/silhouette.hpp"
#include "annoaudit/synth.hpp"

using namespace annoaudit;

TEST_CASE("confusable partners") {
  CHECK(confusable_partner(0, 4) == 1);
  CHECK(confusable_partner(3, 4) == 2);
  CHECK(confusable_partner(4, 5) == 3);
  CHECK(confusable_partner(2, 5) == 3);
  for (std::size_t k = 0; k < 7; ++k) CHECK(confusable_partner(k, 7) != k);
}

TEST_CASE("shape and naming") {
  SynthConfig cfg;
  cfg.instances = 50;
  cfg.annotators = 2;
  cfg.seed = 1;
  const auto d = generate(cfg);
  CHECK(d.dataset.instance_count() == 50);
  CHECK(d.dataset.judgment_count() <= 100);
  CHECK(d.dataset.instances()[0].id == "t000000");
  CHECK(d.dataset.label_set().name(0) == "L0");
  CHECK(d.embeddings.size() == 50);
  CHECK(d.embeddings.dim() == 16);
  CHECK(d.mask.judgments.size() == d.dataset.judgment_count());
  CHECK(d.mask.true_labels.size() == 50);
}

TEST_CASE("annotators that agree still yield one judgment each") {
  SynthConfig cfg;
  cfg.instances = 100;
  cfg.annotators = 4;
  cfg.mislabel_rate = 0.0;
  const auto d = generate(cfg);
  CHECK(d.dataset.judgment_count() == 400);
}

TEST_CASE("noise-free data has zero entropy everywhere") {
  SynthConfig cfg;
  cfg.instances = 200;
  cfg.annotators = 5;
  cfg.mislabel_rate = 0.0;
  const auto d = generate(cfg);
  for (const auto& s : audit_entropy(d.dataset)) CHECK(s.entropy == 0.0);
  for (std::size_t i = 0; i < d.dataset.instance_count(); ++i)
    CHECK(d.dataset.judgment_label(d.dataset.judgments_of(i)[0]) == d.mask.true_labels[i]);
}

TEST_CASE("mislabel rate is honoured") {
  SynthConfig cfg;
  cfg.instances = 1000;
  cfg.annotators = 5;
  cfg.mislabel_rate = 0.2;
  cfg.seed = 12;
  const auto d = generate(cfg);
  std::size_t bad = 0;
  for (std::size_t j = 0; j < d.dataset.judgment_count(); ++j) {
    const bool wrong = d.dataset.judgment_label(j) != d.mask.true_labels[d.dataset.judgment_instance(j)];
    CHECK(wrong == (d.mask.judgments[j] == JudgmentNoise::Mislabeled));
    bad += wrong;
  }
  const double rate = static_cast<double>(bad) / static_cast<double>(d.dataset.judgment_count());
  CHECK(rate >= 0.17);
  CHECK(rate <= 0.23);
}

TEST_CASE("subjective noise stays inside the confusable pair") {
  SynthConfig cfg;
  cfg.instances = 500;
  cfg.mislabel_rate = 0.0;
  cfg.subjective_rate = 0.5;
  const auto d = generate(cfg);
  std::size_t subjective = 0;
  for (std::size_t j = 0; j < d.dataset.judgment_count(); ++j) {
    const std::size_t z = d.mask.true_labels[d.dataset.judgment_instance(j)];
    const std::size_t l = d.dataset.judgment_label(j);
    CHECK((l == z || l == confusable_partner(z, cfg.labels)));
    subjective += d.mask.judgments[j] == JudgmentNoise::Subjective;
  }
  CHECK(subjective > 0);
}

TEST_CASE("centroid spacing matches the separation") {
  SynthConfig cfg;
  cfg.instances = 4000;
  cfg.labels = 3;
  cfg.dim = 3;
  cfg.separation = 6.0;
  cfg.mislabel_rate = 0.0;
  const auto d = generate(cfg);
  std::vector<std::vector<double>> mean(3, std::vector<double>(3, 0.0));
  std::vector<double> n(3, 0.0);
  for (std::size_t i = 0; i < d.dataset.instance_count(); ++i) {
    const auto v = *d.embeddings.vector(d.dataset.instances()[i].id);
    const std::size_t z = d.mask.true_labels[i];
    n[z] += 1;
    for (std::size_t k = 0; k < 3; ++k) mean[z][k] += v[k];
  }
  double dist2 = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double diff = mean[0][k] / n[0] - mean[1][k] / n[1];
    dist2 += diff * diff;
  }
  CHECK(std::sqrt(dist2) == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("mislabeled judgments have lower silhouette") {
  SynthConfig cfg;
  cfg.instances = 600;
  cfg.seed = 21;
  const auto d = generate(cfg);
  const auto audit = audit_silhouette(d.dataset, d.embeddings);
  double clean = 0, noisy = 0;
  std::size_t nc = 0, nn = 0;
  for (std::size_t j = 0; j < d.dataset.judgment_count(); ++j) {
    if (d.mask.judgments[j] == JudgmentNoise::Mislabeled) {
      noisy += audit.judgment_scores[j];
      ++nn;
    } else {
      clean += audit.judgment_scores[j];
      ++nc;
    }
  }
  CHECK(noisy / nn < clean / nc);
}

TEST_CASE("generation is seeded and validated") {
  SynthConfig cfg;
  cfg.instances = 30;
  cfg.seed = 8;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  CHECK(std::equal(a.embeddings.row(7).begin(), a.embeddings.row(7).end(), b.embeddings.row(7).begin()));
  CHECK(a.mask.true_labels == b.mask.true_labels);

  SynthConfig bad = cfg;
  bad.mislabel_rate = 1.1;
  CHECK_THROWS_AS(generate(bad), ConfigError);
  bad = cfg;
  bad.mislabel_rate = 0.6;
  bad.subjective_rate = 0.6;
  CHECK_THROWS_AS(generate(bad), ConfigError);
  bad = cfg;
  bad.labels = 1;
  CHECK_THROWS_AS(generate(bad), ConfigError);
  bad = cfg;
  bad.dim = 2;
  CHECK_THROWS_AS(generate(bad), ConfigError);
}
