#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annoaudit/aggregate.hpp"
#include "annoaudit/entropy.hpp"
#include "annoaudit/eval.hpp"
#include "annoaudit/filter.hpp"
#include "annoaudit/ingest.hpp"
#include "annoaudit/silhouette.hpp"
#include "annoaudit/synth.hpp"

namespace annoaudit {

inline constexpr std::size_t kHistogramBins = 20;

struct MetricSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Empty input gives an all-zero summary.
MetricSummary summarize(std::span<const double> values);

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  /// Uniform bins over [lo, hi]; values outside are clamped into the end bins.
  std::vector<std::uint64_t> counts;
};

Histogram make_histogram(std::span<const double> values, double lo, double hi, std::size_t bins = kHistogramBins);

struct DatasetStats {
  std::size_t instances = 0;
  std::size_t judgments = 0;
  std::size_t labels = 0;
  std::size_t annotators = 0;
};

DatasetStats dataset_stats(const Dataset& dataset);

struct AuditOptions {
  bool entropy = true;
  bool silhouette = false;
  /// Tie-break seed for the majority labels that group the entropy histograms.
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct AuditReport {
  DatasetStats stats;
  std::vector<std::string> labels;
  std::vector<MajorityLabel> majority;
  std::optional<std::vector<EntropyScore>> entropy;
  std::optional<MetricSummary> entropy_summary;
  /// One histogram over [0, ln N] per label, grouping instances by majority label.
  std::vector<Histogram> entropy_histograms;
  std::optional<SilhouetteAudit> silhouette;
  /// Over judgments (not points).
  std::optional<MetricSummary> silhouette_summary;
  /// One histogram over [-1, 1] per label, grouping judgments by their label.
  std::vector<Histogram> silhouette_histograms;
  std::optional<AlignmentReport> alignment;
};

/// Throws ConfigError when silhouette is requested without a store, and
/// SchemaError when the store lacks embeddings for some instance.
AuditReport build_audit_report(const Dataset& dataset, const EmbeddingStore* store, const AuditOptions& options);

std::string audit_report_json(const AuditReport& report, const Dataset& dataset);
std::string removal_log_json(const RemovalLog& log);
std::string noise_mask_json(const NoiseMask& mask, const Dataset& dataset);

/// Columns: strategy,fraction,seed,macro_f1,accuracy,mean_confidence,n_train,n_test,degenerate
std::string sweep_csv(std::span<const EvalResult> results);
std::string sweep_json(std::span<const EvalResult> results, const SweepConfig& config);

/// Shortest round-trip decimal form.
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace annoaudit
