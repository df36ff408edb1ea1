#include <benchmark/benchmark.h>

#include <random>

#include "annoaudit/silhouette.hpp"

namespace {

annoaudit::ClusterPointSet blobs(std::size_t n, std::size_t dim, std::size_t k) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> nd;
  std::vector<float> coords(n * dim);
  std::vector<std::size_t> cluster(n);
  for (std::size_t i = 0; i < n; ++i) {
    cluster[i] = i % k;
    for (std::size_t d = 0; d < dim; ++d) coords[i * dim + d] = nd(rng) + (d == cluster[i] ? 4.0f : 0.0f);
  }
  return annoaudit::ClusterPointSet(dim, std::move(coords), std::move(cluster), k);
}

void BM_Silhouette(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto points = blobs(n, dim, 8);
  for (auto _ : state) benchmark::DoNotOptimize(annoaudit::silhouette_scores(points));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}
BENCHMARK(BM_Silhouette)->Args({1000, 16})->Args({2000, 384})->Args({10000, 384})->Unit(benchmark::kMillisecond);

void BM_SilhouetteBlock(benchmark::State& state) {
  const auto points = blobs(4000, 128, 8);
  const annoaudit::SilhouetteOptions opt{1, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(annoaudit::silhouette_scores(points, opt));
}
BENCHMARK(BM_SilhouetteBlock)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
