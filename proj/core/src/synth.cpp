#include "annoaudit/synth.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "annoaudit/error.hpp"
#include "annoaudit/rng.hpp"

namespace annoaudit {

void SynthConfig::validate() const {
  if (labels < 2) throw ConfigError("synth: need at least 2 labels");
  if (dim < labels) throw ConfigError("synth: dim must be >= labels (centroids sit on coordinate axes)");
  if (instances < 1) throw ConfigError("synth: need at least one instance");
  if (annotators < 1) throw ConfigError("synth: need at least one annotator per instance");
  if (!(mislabel_rate >= 0.0 && mislabel_rate <= 1.0)) throw ConfigError("synth: mislabel rate must be in [0, 1]");
  if (!(subjective_rate >= 0.0 && subjective_rate <= 1.0))
    throw ConfigError("synth: subjective rate must be in [0, 1]");
  if (mislabel_rate + subjective_rate > 1.0 + 1e-12)
    throw ConfigError("synth: mislabel rate + subjective rate must be <= 1");
  if (!(separation >= 0.0) || !std::isfinite(separation)) throw ConfigError("synth: separation must be >= 0");
}

std::string_view to_string(JudgmentNoise noise) noexcept {
  switch (noise) {
    case JudgmentNoise::Clean: return "clean";
    case JudgmentNoise::Mislabeled: return "mislabeled";
    case JudgmentNoise::Subjective: return "subjective";
  }
  return "unknown";
}

std::size_t confusable_partner(std::size_t label, std::size_t label_count) noexcept {
  const std::size_t partner = label ^ 1u;
  return partner < label_count ? partner : label - 1;
}

SynthData generate(const SynthConfig& config) {
  config.validate();
  Stream latent(derive_key(config.seed, "synth-latent"));
  Stream embed(derive_key(config.seed, "synth-embedding"));
  Stream annotate(derive_key(config.seed, "synth-annotation"));

  std::vector<std::string> names;
  for (std::size_t k = 0; k < config.labels; ++k) names.push_back("L" + std::to_string(k));
  LabelSet label_set(names);

  const double offset = config.separation / std::sqrt(2.0);
  std::vector<Instance> instances;
  std::vector<Judgment> judgments;
  SynthData out;
  out.embeddings = EmbeddingStore(config.dim);
  std::vector<float> vec(config.dim);
  char id[32];

  for (std::size_t i = 0; i < config.instances; ++i) {
    std::snprintf(id, sizeof id, "t%06zu", i);
    const std::size_t z = latent.uniform_below(config.labels);
    out.mask.true_labels.push_back(z);
    instances.push_back(Instance{id, std::nullopt});

    for (std::size_t k = 0; k < config.dim; ++k)
      vec[k] = static_cast<float>((k == z ? offset : 0.0) + embed.normal());
    out.embeddings.add(id, vec);

    for (std::size_t a = 0; a < config.annotators; ++a) {
      const double u = annotate.uniform01();
      std::size_t label = z;
      JudgmentNoise flag = JudgmentNoise::Clean;
      if (u < config.mislabel_rate) {
        const std::size_t wrong = annotate.uniform_below(config.labels - 1);
        label = wrong < z ? wrong : wrong + 1;
        flag = JudgmentNoise::Mislabeled;
      } else if (u < config.mislabel_rate + config.subjective_rate) {
        label = annotate.uniform_below(2) == 0 ? z : confusable_partner(z, config.labels);
        flag = JudgmentNoise::Subjective;
      }
      judgments.push_back(Judgment{id, names[label], "a" + std::to_string(a)});
      out.mask.judgments.push_back(flag);
    }
  }
  out.dataset = Dataset(std::move(label_set), std::move(instances), std::move(judgments));
  return out;
}

}  // namespace annoaudit
