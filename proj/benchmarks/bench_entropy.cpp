#include <benchmark/benchmark.h>

#include "annoaudit/entropy.hpp"
#include "annoaudit/synth.hpp"

namespace {

void BM_AuditEntropy(benchmark::State& state) {
  annoaudit::SynthConfig cfg;
  cfg.instances = static_cast<std::size_t>(state.range(0));
  cfg.annotators = 5;
  cfg.labels = 10;
  const auto data = annoaudit::generate(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(annoaudit::audit_entropy(data.dataset));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.instances));
}
BENCHMARK(BM_AuditEntropy)->Arg(1000)->Arg(20000);

}  // namespace
