#include <benchmark/benchmark.h>

#include "annoaudit/aggregate.hpp"
#include "annoaudit/classifier.hpp"
#include "annoaudit/eval.hpp"
#include "annoaudit/synth.hpp"

namespace {

void BM_Train(benchmark::State& state) {
  annoaudit::SynthConfig cfg;
  cfg.instances = static_cast<std::size_t>(state.range(0));
  cfg.dim = static_cast<std::size_t>(state.range(1));
  const auto data = annoaudit::generate(cfg);
  const annoaudit::Matrix x = annoaudit::feature_matrix(data.dataset, data.embeddings);
  std::vector<std::size_t> y;
  for (const auto& m : annoaudit::majority_labels(data.dataset, 0)) y.push_back(m.label);
  const annoaudit::TrainConfig train;
  for (auto _ : state) benchmark::DoNotOptimize(annoaudit::train(x, y, cfg.labels, train));
}
BENCHMARK(BM_Train)->Args({2000, 16})->Args({2000, 384})->Unit(benchmark::kMillisecond);

}  // namespace
