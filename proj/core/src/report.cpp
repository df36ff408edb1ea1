#include "annoaudit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "annoaudit/error.hpp"

namespace annoaudit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json summary_json(const MetricSummary& s) {
  return ordered_json{{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"min", s.min}, {"max", s.max}};
}

ordered_json histograms_json(const std::vector<Histogram>& hists, const std::vector<std::string>& labels) {
  ordered_json out = ordered_json::array();
  for (std::size_t l = 0; l < hists.size(); ++l)
    out.push_back({{"label", labels[l]}, {"lo", hists[l].lo}, {"hi", hists[l].hi}, {"counts", hists[l].counts}});
  return out;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (const double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(sorted.size());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

Histogram make_histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  Histogram h{lo, hi, std::vector<std::uint64_t>(bins, 0)};
  const double width = hi - lo;
  for (const double v : values) {
    std::size_t bin = 0;
    if (width > 0.0 && v > lo) bin = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width * static_cast<double>(bins)));
    ++h.counts[bin];
  }
  return h;
}

DatasetStats dataset_stats(const Dataset& dataset) {
  std::set<std::string_view> annotators;
  for (const Judgment& j : dataset.judgments()) annotators.insert(j.annotator_id);
  return {dataset.instance_count(), dataset.judgment_count(), dataset.label_set().size(), annotators.size()};
}

AuditReport build_audit_report(const Dataset& dataset, const EmbeddingStore* store, const AuditOptions& options) {
  if (options.silhouette && !store) throw ConfigError("embeddings required for the silhouette metric");
  AuditReport report;
  report.stats = dataset_stats(dataset);
  report.labels = dataset.label_set().names();
  report.majority = majority_labels(dataset, options.seed);
  const std::size_t n_labels = report.labels.size();

  if (options.entropy) {
    report.entropy = audit_entropy(dataset);
    std::vector<double> all;
    std::vector<std::vector<double>> by_label(n_labels);
    for (std::size_t i = 0; i < report.entropy->size(); ++i) {
      all.push_back((*report.entropy)[i].entropy);
      by_label[report.majority[i].label].push_back((*report.entropy)[i].entropy);
    }
    report.entropy_summary = summarize(all);
    const double hi = n_labels > 1 ? std::log(static_cast<double>(n_labels)) : 1.0;
    for (const auto& values : by_label) report.entropy_histograms.push_back(make_histogram(values, 0.0, hi));
  }

  if (store) report.alignment = validate_alignment(dataset, *store);
  if (options.silhouette) {
    if (!report.alignment->silhouette_ready())
      throw SchemaError("no embedding for instance '" + report.alignment->missing_embeddings.front() + "' (" +
                        std::to_string(report.alignment->missing_embeddings.size()) + " missing)");
    report.silhouette = audit_silhouette(dataset, *store, {.threads = options.threads});
    std::vector<std::vector<double>> by_label(n_labels);
    for (std::size_t j = 0; j < dataset.judgment_count(); ++j)
      by_label[dataset.judgment_label(j)].push_back(report.silhouette->judgment_scores[j]);
    report.silhouette_summary = summarize(report.silhouette->judgment_scores);
    for (const auto& values : by_label) report.silhouette_histograms.push_back(make_histogram(values, -1.0, 1.0));
  }
  return report;
}

std::string audit_report_json(const AuditReport& report, const Dataset& dataset) {
  ordered_json out;
  out["dataset"] = {{"instances", report.stats.instances},
                    {"judgments", report.stats.judgments},
                    {"labels", report.stats.labels},
                    {"annotators", report.stats.annotators}};
  out["labels"] = report.labels;
  if (report.alignment) {
    out["alignment"] = {{"missing_embeddings", report.alignment->missing_embeddings},
                        {"orphan_embeddings", report.alignment->orphan_embeddings}};
  }
  if (report.entropy) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < report.entropy->size(); ++i) {
      const EntropyScore& e = (*report.entropy)[i];
      const MajorityLabel& m = report.majority[i];
      rows.push_back({{"instance_id", e.instance_id},
                      {"entropy", e.entropy},
                      {"total_judgments", e.total_judgments},
                      {"majority_label", report.labels[m.label]},
                      {"majority_tied", m.tied}});
    }
    out["entropy"] = {{"unit", "nats"},
                      {"summary", summary_json(*report.entropy_summary)},
                      {"histograms", histograms_json(report.entropy_histograms, report.labels)},
                      {"instances", std::move(rows)}};
  }
  if (report.silhouette) {
    ordered_json rows = ordered_json::array();
    for (std::size_t j = 0; j < dataset.judgment_count(); ++j) {
      const Judgment& jd = dataset.judgments()[j];
      const SilhouetteScore& p = report.silhouette->points[report.silhouette->judgment_point[j]];
      rows.push_back({{"instance_id", jd.instance_id},
                      {"label", jd.label},
                      {"annotator_id", jd.annotator_id},
                      {"score", p.score},
                      {"a", optional_number(p.a)},
                      {"b", p.b}});
    }
    out["silhouette"] = {{"metric", "euclidean"},
                         {"points", report.silhouette->points.size()},
                         {"summary", summary_json(*report.silhouette_summary)},
                         {"histograms", histograms_json(report.silhouette_histograms, report.labels)},
                         {"judgments", std::move(rows)}};
  }
  return out.dump(2) + "\n";
}

std::string removal_log_json(const RemovalLog& log) {
  ordered_json removed = ordered_json::array();
  for (const Judgment& j : log.removed_judgments)
    removed.push_back({{"instance_id", j.instance_id}, {"label", j.label}, {"annotator_id", j.annotator_id}});
  ordered_json out;
  out["strategy"] = std::string(to_string(log.plan.strategy));
  out["fraction"] = log.plan.fraction;
  if (log.plan.strategy == FilterStrategy::RandomInstances || log.plan.strategy == FilterStrategy::RandomJudgments)
    out["seed"] = log.plan.seed;
  out["original"] = {{"instances", log.original_instances}, {"judgments", log.original_judgments}};
  out["kept"] = {{"instances", log.kept_instances}, {"judgments", log.kept_judgments}};
  out["removed_instances"] = log.removed_instances;
  out["removed_judgments"] = std::move(removed);
  return out.dump(2) + "\n";
}

std::string noise_mask_json(const NoiseMask& mask, const Dataset& dataset) {
  ordered_json instances = ordered_json::array();
  for (std::size_t i = 0; i < dataset.instance_count(); ++i)
    instances.push_back({{"instance_id", dataset.instances()[i].id},
                         {"true_label", dataset.label_set().name(mask.true_labels[i])}});
  ordered_json judgments = ordered_json::array();
  for (std::size_t j = 0; j < dataset.judgment_count(); ++j) {
    const Judgment& jd = dataset.judgments()[j];
    judgments.push_back({{"instance_id", jd.instance_id},
                         {"label", jd.label},
                         {"annotator_id", jd.annotator_id},
                         {"noise", std::string(to_string(mask.judgments[j]))}});
  }
  ordered_json out;
  out["instances"] = std::move(instances);
  out["judgments"] = std::move(judgments);
  return out.dump(2) + "\n";
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(std::span<const EvalResult> results) {
  std::ostringstream out;
  out << "strategy,fraction,seed,macro_f1,accuracy,mean_confidence,n_train,n_test,degenerate\n";
  for (const EvalResult& r : results) {
    out << to_string(r.strategy) << ',' << format_double(r.fraction) << ',' << r.seed_index << ','
        << format_double(r.macro_f1) << ',' << format_double(r.accuracy) << ','
        << format_double(r.confidence.mean) << ',' << r.n_train << ',' << r.n_test << ','
        << (r.degenerate ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string sweep_json(std::span<const EvalResult> results, const SweepConfig& config) {
  ordered_json strategies = ordered_json::array();
  for (const FilterStrategy s : config.strategies) strategies.push_back(std::string(to_string(s)));
  ordered_json cfg{{"strategies", std::move(strategies)},
                   {"fractions", config.fractions},
                   {"seeds", config.n_seeds},
                   {"master_seed", config.master_seed},
                   {"train_ratio", config.train_ratio},
                   {"clean_test", config.clean_test},
                   {"epochs", config.train.epochs},
                   {"learning_rate", config.train.learning_rate},
                   {"batch_size", config.train.batch_size},
                   {"l2_penalty", config.train.l2_penalty}};
  ordered_json rows = ordered_json::array();
  for (const EvalResult& r : results) {
    ordered_json row{{"strategy", std::string(to_string(r.strategy))},
                     {"fraction", r.fraction},
                     {"seed", r.seed_index},
                     {"run_seed", r.run_seed},
                     {"macro_f1", r.macro_f1},
                     {"accuracy", r.accuracy},
                     {"mean_confidence", r.confidence.mean},
                     {"confidence_histogram",
                      {{"lo", 0.0}, {"hi", 1.0}, {"counts", r.confidence.histogram}}},
                     {"n_train", r.n_train},
                     {"n_test", r.n_test},
                     {"degenerate", r.degenerate}};
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(std::move(row));
  }
  ordered_json out{{"config", std::move(cfg)}, {"results", std::move(rows)}};
  return out.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace annoaudit
