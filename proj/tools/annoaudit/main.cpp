// annoaudit: noise audits for crowd-annotated text datasets.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annoaudit/annoaudit.hpp"

namespace fs = std::filesystem;
using namespace annoaudit;

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputArgs {
  std::string judgments;
  std::string embeddings;
  std::string format = "auto";
  std::string label_map;

  void add_to(CLI::App& cmd, bool embeddings_required) {
    cmd.add_option("--judgments,-j", judgments, "Judgment JSON-lines file")->required()->check(CLI::ExistingFile);
    auto* emb = cmd.add_option("--embeddings,-e", embeddings, "Embedding file (jsonl or bin)");
    if (embeddings_required) emb->required();
    emb->check(CLI::ExistingFile);
    cmd.add_option("--format", format, "Embedding format")->check(CLI::IsMember({"auto", "jsonl", "bin"}));
    cmd.add_option("--label-map", label_map, "JSON object of label renames")->check(CLI::ExistingFile);
  }

  Dataset load_dataset() const {
    if (label_map.empty()) return parse_judgment_file(judgments);
    const LabelMapping mapping = LabelMapping::from_file(label_map);
    return parse_judgment_file(judgments, &mapping);
  }

  std::optional<EmbeddingStore> load_embeddings() const {
    if (embeddings.empty()) return std::nullopt;
    const EmbeddingFormat fmt = format == "auto" ? embedding_format_for(embeddings) : parse_embedding_format(format);
    return parse_embeddings(embeddings, fmt);
  }
};

unsigned env_threads() {
  if (const char* env = std::getenv("ANNOAUDIT_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw UsageError(std::string("ANNOAUDIT_THREADS must be a non-negative integer, got '") + env + "'");
    }
  }
  return 0;
}

struct ThreadsArg {
  std::optional<unsigned> value;
  void add_to(CLI::App& cmd) {
    cmd.add_option("--threads", value, "Worker threads (default: ANNOAUDIT_THREADS or all cores)");
  }
  unsigned resolve() const { return resolve_threads(value ? *value : env_threads()); }
};

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

// --- audit ---------------------------------------------------------------

struct AuditCmd {
  InputArgs in;
  ThreadsArg threads;
  std::string metric = "entropy";
  std::uint64_t seed = 0;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("audit", "Score instances (entropy) and judgments (silhouette)");
    in.add_to(*cmd, false);
    threads.add_to(*cmd);
    cmd->add_option("--metric", metric, "entropy | silhouette | both")
        ->check(CLI::IsMember({"entropy", "silhouette", "both"}));
    cmd->add_option("--seed", seed, "Tie-break seed for majority labels in the histograms");
    cmd->add_option("--out,-o", out, "Report JSON path")->required();
    cmd->callback([this] { run(); });
  }

  void run() const {
    AuditOptions options;
    options.entropy = metric != "silhouette";
    options.silhouette = metric != "entropy";
    options.seed = seed;
    options.threads = threads.resolve();
    if (options.silhouette && in.embeddings.empty())
      throw UsageError("embeddings required for --metric " + metric + " (pass --embeddings)");
    const Dataset dataset = in.load_dataset();
    const std::optional<EmbeddingStore> store = in.load_embeddings();
    const AuditReport report = build_audit_report(dataset, store ? &*store : nullptr, options);
    write_text_file(out, audit_report_json(report, dataset));
    std::cerr << "audited " << dataset.instance_count() << " instances, " << dataset.judgment_count()
              << " judgments -> " << out << '\n';
  }
};

// --- filter --------------------------------------------------------------

struct FilterCmd {
  InputArgs in;
  ThreadsArg threads;
  std::string strategy;
  double fraction = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string log;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("filter", "Remove the noisiest instances or judgments");
    in.add_to(*cmd, false);
    threads.add_to(*cmd);
    cmd->add_option("--strategy,-s", strategy, "entropy | silhouette | random_instances | random_judgments")
        ->required()
        ->check(CLI::IsMember({"entropy", "silhouette", "random_instances", "random_judgments"}));
    cmd->add_option("--fraction,-f", fraction, "Fraction of the population to remove")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", seed, "Seed (required for random strategies)");
    cmd->add_option("--out,-o", out, "Refined judgment file")->required();
    cmd->add_option("--log", log, "Removal log JSON (default: <out>.removal.json)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const FilterStrategy s = parse_strategy(strategy);
    if ((s == FilterStrategy::RandomInstances || s == FilterStrategy::RandomJudgments) && !seed)
      throw UsageError("--seed is required for strategy " + strategy);
    if (s == FilterStrategy::Silhouette && in.embeddings.empty())
      throw UsageError("embeddings required for strategy silhouette (pass --embeddings)");

    const Dataset dataset = in.load_dataset();
    FilterResult result;
    switch (s) {
      case FilterStrategy::Entropy:
        result = filter_entropy(dataset, audit_entropy(dataset), fraction);
        break;
      case FilterStrategy::Silhouette: {
        const EmbeddingStore store = *in.load_embeddings();
        const auto audit = audit_silhouette(dataset, store, {.threads = threads.resolve()});
        result = filter_silhouette(dataset, audit.judgment_scores, fraction);
        break;
      }
      case FilterStrategy::RandomInstances:
        result = filter_random(dataset, fraction, *seed, Granularity::Instances);
        break;
      case FilterStrategy::RandomJudgments:
        result = filter_random(dataset, fraction, *seed, Granularity::Judgments);
        break;
    }
    write_judgment_file(result.dataset, out);
    const fs::path log_path = log.empty() ? sibling(out, ".removal.json") : fs::path(log);
    write_text_file(log_path, removal_log_json(result.log));
    std::cerr << "removed " << result.log.removed_judgments.size() << " judgments ("
              << result.log.removed_instances.size() << " instances); kept " << result.log.kept_judgments
              << " judgments -> " << out << '\n';
  }
};

// --- evaluate / sweep ----------------------------------------------------

struct TrainArgs {
  TrainConfig train;
  double train_ratio = 0.7;
  bool clean_test = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--epochs", train.epochs, "Training epochs")->check(CLI::PositiveNumber);
    cmd.add_option("--lr", train.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
    cmd.add_option("--batch-size", train.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
    cmd.add_option("--l2", train.l2_penalty, "L2 penalty")->check(CLI::NonNegativeNumber);
    cmd.add_option("--train-ratio", train_ratio, "Train share of the split")->check(CLI::Range(0.0, 1.0));
    cmd.add_flag("--clean-test", clean_test,
                 "Split before filtering and evaluate on unfiltered test data (deviates from the standard protocol)");
  }
};

std::vector<EvalResult> run_sweep(const InputArgs& in, const SweepConfig& config) {
  const Dataset dataset = in.load_dataset();
  const EmbeddingStore store = *in.load_embeddings();
  return sweep(dataset, store, config);
}

struct EvaluateCmd {
  InputArgs in;
  ThreadsArg threads;
  TrainArgs train;
  std::string strategy = "random_instances";
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("evaluate", "Filter, split, train and score one configuration");
    in.add_to(*cmd, true);
    threads.add_to(*cmd);
    train.add_to(*cmd);
    cmd->add_option("--strategy,-s", strategy, "Filter strategy")
        ->check(CLI::IsMember({"entropy", "silhouette", "random_instances", "random_judgments"}));
    cmd->add_option("--fraction,-f", fraction, "Fraction removed")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", seed, "Master seed")->required();
    cmd->add_option("--out,-o", out, "Result JSON path")->required();
    cmd->callback([this] { run(); });
  }

  void run() const {
    SweepConfig config;
    config.strategies = {parse_strategy(strategy)};
    config.fractions = {fraction};
    config.n_seeds = 1;
    config.master_seed = seed;
    config.train = train.train;
    config.train_ratio = train.train_ratio;
    config.clean_test = train.clean_test;
    config.threads = threads.resolve();
    const auto results = run_sweep(in, config);
    write_text_file(out, sweep_json(results, config));
    const EvalResult& r = results.front();
    std::cout << "macro_f1=" << format_double(r.macro_f1) << " accuracy=" << format_double(r.accuracy)
              << " mean_confidence=" << format_double(r.confidence.mean) << (r.degenerate ? " (degenerate)" : "")
              << '\n';
  }
};

struct SweepCmd {
  InputArgs in;
  ThreadsArg threads;
  TrainArgs train;
  std::vector<std::string> strategies{"entropy", "silhouette", "random_instances", "random_judgments"};
  std::vector<double> fractions{0.0, 0.1, 0.2, 0.3};
  unsigned seeds = 5;
  std::uint64_t seed = 0;
  std::string out_csv;
  std::string out_json;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep", "Grid of strategies x fractions x seeds");
    in.add_to(*cmd, true);
    threads.add_to(*cmd);
    train.add_to(*cmd);
    cmd->add_option("--strategies", strategies, "Comma-separated strategies")
        ->delimiter(',')
        ->check(CLI::IsMember({"entropy", "silhouette", "random_instances", "random_judgments"}));
    cmd->add_option("--fractions", fractions, "Comma-separated removal fractions")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seeds", seeds, "Runs per (strategy, fraction)")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Master seed")->required();
    cmd->add_option("--out-csv", out_csv, "CSV output path")->required();
    cmd->add_option("--out-json", out_json, "JSON output path (default: <out-csv>.json)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    SweepConfig config;
    for (const std::string& s : strategies) config.strategies.push_back(parse_strategy(s));
    config.fractions = fractions;
    config.n_seeds = seeds;
    config.master_seed = seed;
    config.train = train.train;
    config.train_ratio = train.train_ratio;
    config.clean_test = train.clean_test;
    config.threads = threads.resolve();
    const auto results = run_sweep(in, config);
    write_text_file(out_csv, sweep_csv(results));
    const fs::path json_path = out_json.empty() ? sibling(out_csv, ".json") : fs::path(out_json);
    write_text_file(json_path, sweep_json(results, config));
    std::cerr << "wrote " << results.size() << " rows -> " << out_csv << ", " << json_path.string() << '\n';
  }
};

// --- simulate ------------------------------------------------------------

struct SimulateCmd {
  SynthConfig config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "bin";

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Generate a planted-cluster dataset with known noise");
    cmd->add_option("--labels", config.labels, "Number of labels K")->check(CLI::Range(2, 1 << 16));
    cmd->add_option("--dim", config.dim, "Embedding dimension D (>= K)")->check(CLI::PositiveNumber);
    cmd->add_option("--instances", config.instances, "Number of instances M")->check(CLI::PositiveNumber);
    cmd->add_option("--annotators", config.annotators, "Annotators per instance A")->check(CLI::PositiveNumber);
    cmd->add_option("--noise", config.mislabel_rate, "Mislabel rate")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--subjective", config.subjective_rate, "Subjective (confusable pair) rate")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--separation", config.separation, "Centroid distance in within-cluster std units")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "Generator seed")->required();
    cmd->add_option("--out,-o", out_dir, "Output directory")->required();
    cmd->add_option("--format", format, "Embedding format")->check(CLI::IsMember({"jsonl", "bin"}));
    cmd->callback([this] { run(); });
  }

  void run() {
    config.seed = *seed;
    try {
      config.validate();
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    const SynthData data = generate(config);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const EmbeddingFormat fmt = parse_embedding_format(format);
    write_judgment_file(data.dataset, dir / "judgments.jsonl");
    write_embeddings(data.embeddings, dir / (fmt == EmbeddingFormat::Binary ? "embeddings.bin" : "embeddings.jsonl"),
                     fmt);
    write_text_file(dir / "mask.json", noise_mask_json(data.mask, data.dataset));
    std::cerr << "wrote " << data.dataset.instance_count() << " instances, " << data.dataset.judgment_count()
              << " judgments -> " << dir.string() << '\n';
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annoaudit: noise audits for crowd-annotated text datasets"};
  app.require_subcommand(1);
  AuditCmd audit;
  FilterCmd filter;
  EvaluateCmd evaluate;
  SweepCmd sweep_cmd;
  SimulateCmd simulate;
  audit.setup(app);
  filter.setup(app);
  evaluate.setup(app);
  sweep_cmd.setup(app);
  simulate.setup(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
