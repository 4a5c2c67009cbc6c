#include "pcld/experiment.hpp"

#include <cmath>
#include <map>
#include <set>
#include <type_traits>

#include <fmt/format.h>

#include "pcld/checkpoint.hpp"
#include "pcld/digest.hpp"
#include "pcld/error.hpp"
#include "pcld/predictor.hpp"
#include "pcld/random.hpp"
#include "pcld/splitter.hpp"
#include "pcld/textprep.hpp"
#include "pcld/tokenizer.hpp"

namespace pcld {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (dev_fractions.empty()) {
    throw UsageError("experiment config: no dev fractions");
  }
  for (const double f : dev_fractions) {
    if (!(f > 0.0 && f < 1.0)) {
      throw UsageError(fmt::format("experiment config: dev fraction {} outside (0, 1)", f));
    }
  }
  if (optimizers.empty()) {
    throw UsageError("experiment config: at least one optimizer required");
  }
  if (fallback_class != 0 && fallback_class != 1) {
    throw UsageError("experiment config: fallback_class must be 0 or 1");
  }
  train.validate();
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  std::vector<std::string> optimizers;
  for (const auto o : c.optimizers) {
    optimizers.push_back(to_string(o));
  }
  nlohmann::json train = c.train;
  train.erase("optimizer");
  j = nlohmann::json{{"train_file", c.train_file.generic_string()},
                     {"test_file", c.test_file.generic_string()},
                     {"output_dir", c.output_dir.generic_string()},
                     {"skip_lines", c.skip_lines},
                     {"test_has_labels", c.test_has_labels},
                     {"dev_fractions", c.dev_fractions},
                     {"optimizers", optimizers},
                     {"seed", c.seed},
                     {"holdout_ids", c.holdout_ids},
                     {"holdout_preset", c.holdout_preset.generic_string()},
                     {"stratify", c.stratify},
                     {"fallback_class", c.fallback_class},
                     {"max_vocab", c.max_vocab},
                     {"max_source_tokens", c.max_source_tokens},
                     {"train", train},
                     {"model", c.model}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  const ExperimentConfig d;
  c.train_file = j.value("train_file", std::string{});
  c.test_file = j.value("test_file", std::string{});
  c.output_dir = j.value("output_dir", d.output_dir.generic_string());
  c.skip_lines = j.value("skip_lines", d.skip_lines);
  c.test_has_labels = j.value("test_has_labels", d.test_has_labels);
  c.dev_fractions = j.value("dev_fractions", d.dev_fractions);
  if (j.contains("optimizers")) {
    c.optimizers.clear();
    for (const auto& name : j.at("optimizers")) {
      c.optimizers.push_back(parse_optimizer(name.get<std::string>()));
    }
  }
  c.seed = j.value("seed", d.seed);
  c.holdout_ids = j.value("holdout_ids", d.holdout_ids);
  c.holdout_preset = j.value("holdout_preset", std::string{});
  c.stratify = j.value("stratify", d.stratify);
  c.fallback_class = j.value("fallback_class", d.fallback_class);
  c.max_vocab = j.value("max_vocab", d.max_vocab);
  c.max_source_tokens = j.value("max_source_tokens", d.max_source_tokens);
  c.train = j.value("train", nlohmann::json::object()).get<TrainConfig>();
  c.model = j.value("model", nlohmann::json::object()).get<ModelConfig>();
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(fmt::format("config {}: {}", path.string(), e.what()));
  }
  try {
    return (j.contains("config") ? j.at("config") : j).get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(fmt::format("config {}: {}", path.string(), e.what()));
  }
}

std::string fraction_label(double fraction) { return fmt::format("{:g}%", fraction * 100.0); }

namespace {

// Runs fn, re-throwing any library error with the stage name prefixed.
template <typename Fn>
std::invoke_result_t<Fn> stage(std::string_view name, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw UsageError(fmt::format("stage '{}': {}", name, e.what()));
  } catch (const DataError& e) {
    throw DataError(fmt::format("stage '{}': {}", name, e.what()));
  } catch (const TrainingError& e) {
    throw TrainingError(fmt::format("stage '{}': {}", name, e.what()));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("stage '{}': {}", name, e.what()));
  } catch (const fs::filesystem_error& e) {
    throw DataError(fmt::format("stage '{}': {}", name, e.what()));
  }
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void emit(const std::string& name, std::string_view bytes) {
    write_file(dir_ / name, bytes);
    artifacts_.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
  }

  const nlohmann::json& artifacts() const { return artifacts_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  nlohmann::json artifacts_ = nlohmann::json::array();
};

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json stats_json(const CountSummary& s) { return {{"total", s.total}, {"neg", s.neg}, {"pos", s.pos}}; }

CleaningReport clean_records(std::vector<ParagraphRecord>& records) {
  CleaningReport total;
  for (auto& r : records) {
    auto result = clean(r.text);
    r.text = std::move(result.text);
    total += result.report;
  }
  return total;
}

nlohmann::json cleaning_json(const CleaningReport& r) {
  return {{"emails_removed", r.emails_removed},
          {"urls_removed", r.urls_removed},
          {"ips_removed", r.ips_removed},
          {"chars_dropped", r.chars_dropped}};
}

std::vector<std::string> collect_holdouts(const ExperimentConfig& config) {
  std::vector<std::string> ids = config.holdout_ids;
  if (!config.holdout_preset.empty()) {
    for (auto& id : parse_holdout_preset(read_file(config.holdout_preset))) {
      ids.push_back(std::move(id));
    }
  }
  return ids;
}

nlohmann::json metrics_block(const MetricsReport& report, double ooc_rate) {
  nlohmann::json j = report_to_json(report);
  j["out_of_class_rate"] = ooc_rate;
  return j;
}

nlohmann::json history_json(const std::vector<EpochLog>& history) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : history) {
    out.push_back({{"epoch", e.epoch},
                   {"train_loss", e.train_loss},
                   {"dev_loss", e.dev_loss},
                   {"dev_accuracy", e.dev_accuracy},
                   {"dev_out_of_class_rate", e.dev_out_of_class_rate},
                   {"last_lr", e.last_lr}});
  }
  return out;
}

constexpr std::string_view kScheduleNote =
    "warmup length and AdamW weight decay are local defaults";

}  // namespace

nlohmann::json write_split(const std::vector<ParagraphRecord>& records, const SplitSpec& spec,
                           const std::string& input_digest, const std::string& stage_name, const fs::path& out_dir) {
  const Split parts = split(records, spec);
  write_file(out_dir / "train.tsv", serialize_corpus(parts.train));
  write_file(out_dir / "dev.tsv", serialize_corpus(parts.dev));
  const auto dev_before =
      spec.stratify ? parts.dev.size()
                    : static_cast<std::size_t>(std::floor(spec.dev_fraction * static_cast<double>(records.size())));
  nlohmann::json manifest{{"seed", spec.seed},
                          {"dev_fraction", spec.dev_fraction},
                          {"stratify", spec.stratify},
                          {"rng", Rng::kAlgorithmName},
                          {"stage", stage_name},
                          {"input_sha256", input_digest},
                          {"holdout_ids", spec.holdout_ids},
                          {"sizes",
                           {{"input", records.size()},
                            {"train", parts.train.size()},
                            {"dev", parts.dev.size()},
                            {"dev_before_holdout", dev_before}}}};
  write_file(out_dir / "split_manifest.json", dump(manifest));
  return manifest;
}

RunResult run_pipeline(const ExperimentConfig& config, OptimizerKind optimizer, double dev_fraction,
                       const fs::path& run_dir) {
  stage("config", [&] { config.validate(); });
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0)) {
    throw UsageError(fmt::format("stage 'config': dev fraction {} outside (0, 1)", dev_fraction));
  }

  ExperimentConfig row_config = config;
  row_config.dev_fractions = {dev_fraction};
  row_config.optimizers = {optimizer};
  row_config.output_dir = run_dir;

  const std::uint64_t split_seed = config.seed;
  const std::uint64_t model_seed = config.seed + 1;
  const std::uint64_t train_seed = config.seed + 2;

  // ingest
  struct Inputs {
    std::vector<ParagraphRecord> train;
    std::vector<ParagraphRecord> test;
    std::string train_digest;
    std::string test_digest;
  };
  Inputs inputs = stage("ingest", [&] {
    if (config.train_file.empty() || !fs::exists(config.train_file)) {
      throw DataError(fmt::format("train file not found: {}", config.train_file.string()));
    }
    Inputs in;
    const auto train_bytes = read_file(config.train_file);
    in.train_digest = sha256_hex(train_bytes);
    ParseOptions opts;
    opts.skip_lines = config.skip_lines;
    in.train = parse_corpus(train_bytes, opts);
    if (!config.test_file.empty()) {
      if (!fs::exists(config.test_file)) {
        throw DataError(fmt::format("test file not found: {}", config.test_file.string()));
      }
      const auto test_bytes = read_file(config.test_file);
      in.test_digest = sha256_hex(test_bytes);
      ParseOptions test_opts;
      test_opts.has_labels = config.test_has_labels;
      in.test = parse_corpus(test_bytes, test_opts);
    }
    return in;
  });
  const CountSummary train_stats = stage("ingest", [&] { return corpus_stats(inputs.train); });

  ArtifactWriter out(run_dir);

  // clean
  CleaningReport cleaning = clean_records(inputs.train);
  cleaning += clean_records(inputs.test);

  // split
  SplitSpec spec;
  spec.dev_fraction = dev_fraction;
  spec.seed = split_seed;
  spec.stratify = config.stratify;
  spec.holdout_ids = stage("split", [&] { return collect_holdouts(config); });
  const Split parts = stage("split", [&] { return split(inputs.train, spec); });
  if (parts.dev.empty()) {
    throw DataError(fmt::format("stage 'split': dev set is empty for fraction {} of {} records", dev_fraction,
                                inputs.train.size()));
  }
  out.emit("train.tsv", serialize_corpus(parts.train));
  out.emit("dev.tsv", serialize_corpus(parts.dev));

  // train
  const Vocabulary vocab = stage("train", [&] {
    std::vector<std::string> texts;
    texts.reserve(parts.train.size());
    for (const auto& r : parts.train) {
      texts.push_back(r.text);
    }
    return build_vocab(texts, config.max_vocab);
  });
  out.emit("vocab.txt", vocab.serialize());

  ModelConfig model_config = config.model;
  model_config.vocab_size = vocab.size();
  model_config.seed = model_seed;
  if (model_config.max_seq_len < config.max_source_tokens) {
    model_config.max_seq_len = config.max_source_tokens;
  }
  TrainConfig train_config = config.train;
  train_config.optimizer = optimizer;
  train_config.seed = train_seed;

  const TrainOutcome outcome = stage("train", [&] {
    const auto train_set = encode_examples(parts.train, vocab, config.max_source_tokens);
    const auto dev_set = encode_examples(parts.dev, vocab, config.max_source_tokens);
    return train(model_config, train_config, train_set, dev_set, vocab);
  });
  out.emit("checkpoint.bin", serialize_checkpoint(outcome.best));
  out.emit("training_log.json",
           dump({{"history", history_json(outcome.history)}, {"best_epoch", outcome.best.epoch},
                 {"best_dev_loss", outcome.best.val_loss}}));

  // predict
  PredictOptions popts;
  popts.fallback_class = config.fallback_class;
  popts.max_source_tokens = config.max_source_tokens;
  const auto dev_pred = stage("predict", [&] { return predict_records(outcome.best, vocab, parts.dev, popts); });
  out.emit("predictions_dev.txt", format_submission(dev_pred.predictions));
  out.emit("audit_dev.jsonl", format_audit(dev_pred.predictions));
  PredictionBatch test_pred;
  if (!inputs.test.empty()) {
    test_pred = stage("predict", [&] { return predict_records(outcome.best, vocab, inputs.test, popts); });
    out.emit("predictions_test.txt", format_submission(test_pred.predictions));
    out.emit("audit_test.jsonl", format_audit(test_pred.predictions));
  }

  // evaluate
  RunResult result;
  result.run_dir = run_dir;
  result.best_epoch = outcome.best.epoch;
  result.history = outcome.history;
  stage("evaluate", [&] {
    result.dev_metrics =
        build_report(confusion(predicted_labels(dev_pred.predictions), gold_labels(parts.dev)));
    result.dev_out_of_class_rate = dev_pred.out_of_class_rate;
    if (!inputs.test.empty() && config.test_has_labels) {
      result.test_metrics =
          build_report(confusion(predicted_labels(test_pred.predictions), gold_labels(inputs.test)));
      result.test_out_of_class_rate = test_pred.out_of_class_rate;
    }
  });

  nlohmann::json metrics{{"dev", metrics_block(result.dev_metrics, result.dev_out_of_class_rate)},
                         {"best_epoch", result.best_epoch},
                         {"optimizer", to_string(optimizer)},
                         {"dev_fraction", dev_fraction}};
  metrics["test"] = result.test_metrics ? metrics_block(*result.test_metrics, result.test_out_of_class_rate)
                                        : nlohmann::json(nullptr);
  out.emit("metrics.json", dump(metrics));

  std::string metrics_text = fmt::format("dev ({} records)\n{}", parts.dev.size(), format_report(result.dev_metrics));
  metrics_text += fmt::format("out-of-class rate: {}\n", format_metric(result.dev_out_of_class_rate));
  if (result.test_metrics) {
    metrics_text += fmt::format("\ntest ({} records)\n{}", inputs.test.size(), format_report(*result.test_metrics));
    metrics_text += fmt::format("out-of-class rate: {}\n", format_metric(result.test_out_of_class_rate));
  }
  out.emit("metrics.txt", metrics_text);
  out.emit("confusion_dev.svg", confusion_svg(result.dev_metrics.confusion));
  out.emit("errors_dev.txt", format_error_table(error_table(dev_pred.predictions, parts.dev, true)));

  if (!spec.holdout_ids.empty()) {
    const std::set<std::string> wanted(spec.holdout_ids.begin(), spec.holdout_ids.end());
    std::vector<Prediction> hp;
    std::vector<ParagraphRecord> hr;
    for (std::size_t i = 0; i < parts.dev.size(); ++i) {
      if (wanted.contains(parts.dev[i].par_id)) {
        hp.push_back(dev_pred.predictions[i]);
        hr.push_back(parts.dev[i]);
      }
    }
    out.emit("holdout_predictions.txt", format_error_table(error_table(hp, hr, false)));
  }

  const auto dev_before = static_cast<std::size_t>(std::floor(dev_fraction * static_cast<double>(inputs.train.size())));
  nlohmann::json manifest;
  manifest["tool"] = "pcldetect";
  manifest["version"] = kVersion;
  manifest["config"] = row_config;
  manifest["seeds"] = {{"split", split_seed}, {"model_init", model_seed}, {"batch_order", train_seed}};
  manifest["rng"] = Rng::kAlgorithmName;
  manifest["inputs"] = {{"train_file", {{"path", config.train_file.generic_string()}, {"sha256", inputs.train_digest}}}};
  if (!config.test_file.empty()) {
    manifest["inputs"]["test_file"] = {{"path", config.test_file.generic_string()}, {"sha256", inputs.test_digest}};
  }
  manifest["corpus"] = {{"train", stats_json(train_stats)},
                        {"test_records", inputs.test.size()},
                        {"reference_labeled_total", kReportedLabeledTotal},
                        {"reference_dataset_paragraphs", kDatasetParagraphs},
                        {"matches_reference_total", train_stats.total == kReportedLabeledTotal}};
  manifest["cleaning"] = cleaning_json(cleaning);
  manifest["split"] = {{"stage", "after-cleaning"},
                       {"dev_fraction", dev_fraction},
                       {"dev_before_holdout", dev_before},
                       {"train", parts.train.size()},
                       {"dev", parts.dev.size()},
                       {"holdout_ids", spec.holdout_ids}};
  manifest["model_config"] = model_config;
  manifest["resolved_train_config"] = outcome.best.train_config;
  manifest["parameter_count"] = parameter_count(outcome.best.params);
  manifest["best_epoch"] = outcome.best.epoch;
  manifest["best_dev_loss"] = outcome.best.val_loss;
  manifest["vocab_hash"] = vocab.digest();
  manifest["notes"] = {kScheduleNote};
  manifest["artifacts"] = out.artifacts();
  write_file(run_dir / "manifest.json", dump(manifest));

  result.manifest = std::move(manifest);
  return result;
}

RunResult run_pipeline(const ExperimentConfig& config) {
  config.validate();
  return run_pipeline(config, config.optimizers.front(), config.dev_fractions.front(), config.output_dir);
}

nlohmann::json row_hyperparameters(const ExperimentConfig& config) {
  nlohmann::json j = config;
  j.erase("dev_fractions");
  j.erase("optimizers");
  j.erase("output_dir");
  return j;
}

namespace {

void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, nlohmann::json>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    }
  } else {
    out[prefix] = j;
  }
}

}  // namespace

std::vector<std::string> differing_hyperparameters(const std::vector<nlohmann::json>& rows) {
  std::set<std::string> diffs;
  if (rows.empty()) {
    return {};
  }
  std::map<std::string, nlohmann::json> first;
  flatten(rows.front(), "", first);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::map<std::string, nlohmann::json> other;
    flatten(rows[i], "", other);
    for (const auto& [k, v] : first) {
      const auto it = other.find(k);
      if (it == other.end() || it->second != v) {
        diffs.insert(k);
      }
    }
    for (const auto& [k, v] : other) {
      if (!first.contains(k)) {
        diffs.insert(k);
      }
    }
  }
  return {diffs.begin(), diffs.end()};
}

namespace {

GridRow run_row(const ExperimentConfig& config, OptimizerKind optimizer, double fraction, const fs::path& dir) {
  GridRow row;
  row.optimizer = optimizer;
  row.dev_fraction = fraction;
  row.run_dir = dir;
  ExperimentConfig row_config = config;
  row_config.dev_fractions = {fraction};
  row_config.optimizers = {optimizer};
  row.hyperparameters = row_hyperparameters(row_config);
  try {
    const RunResult r = run_pipeline(config, optimizer, fraction, dir);
    const auto& m = r.eval_metrics();
    row.ok = true;
    row.eval_split = r.test_metrics ? "test" : "dev";
    row.macro = m.macro;
    row.positive = m.per_class[1].scores;
    row.out_of_class_rate = r.eval_out_of_class_rate();
    row.best_epoch = r.best_epoch;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

void finish_grid(GridReport& report) {
  std::vector<nlohmann::json> hp;
  for (const auto& r : report.rows) {
    hp.push_back(r.hyperparameters);
  }
  report.differing_keys = differing_hyperparameters(hp);
  report.hyperparameters_constant = report.differing_keys.empty();
  std::set<std::string> splits;
  for (const auto& r : report.rows) {
    if (r.ok) {
      splits.insert(r.eval_split);
    }
  }
  if (splits.contains("dev")) {
    report.eval_note = "no labeled test file: rows are scored on their own dev split, so they are not directly comparable";
  } else {
    report.eval_note = "rows scored on the shared labeled test file";
  }
}

}  // namespace

GridReport run_ablation(const ExperimentConfig& config) {
  config.validate();
  GridReport report;
  for (const auto optimizer : config.optimizers) {
    for (const double f : config.dev_fractions) {
      const auto dir = config.output_dir / "ablation" /
                       fmt::format("{}-dev{:02}", to_string(optimizer), static_cast<int>(std::lround(f * 100.0)));
      report.rows.push_back(run_row(config, optimizer, f, dir));
    }
  }
  finish_grid(report);
  write_file(config.output_dir / "ablation.json", dump(grid_to_json(report)));
  write_file(config.output_dir / "ablation.txt", format_grid(report, false));
  return report;
}

GridReport compare_optimizers(const ExperimentConfig& config) {
  config.validate();
  GridReport report;
  const double f = config.dev_fractions.front();
  for (const auto optimizer : config.optimizers) {
    report.rows.push_back(run_row(config, optimizer, f, config.output_dir / "compare" / to_string(optimizer)));
  }
  finish_grid(report);
  write_file(config.output_dir / "compare.json", dump(grid_to_json(report)));
  write_file(config.output_dir / "compare.txt", format_grid(report, true));
  return report;
}

nlohmann::json grid_to_json(const GridReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row{{"optimizer", to_string(r.optimizer)},
                       {"dev_fraction", r.dev_fraction},
                       {"ok", r.ok},
                       {"run_dir", r.run_dir.generic_string()}};
    if (r.ok) {
      row["eval_split"] = r.eval_split;
      row["macro"] = {{"precision", r.macro.precision}, {"recall", r.macro.recall}, {"f1", r.macro.f1}};
      row["positive"] = {{"precision", r.positive.precision}, {"recall", r.positive.recall}, {"f1", r.positive.f1}};
      row["out_of_class_rate"] = r.out_of_class_rate;
      row["best_epoch"] = r.best_epoch;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(std::move(row));
  }
  return {{"rows", rows},
          {"hyperparameters_constant", report.hyperparameters_constant},
          {"differing_keys", report.differing_keys},
          {"hyperparameters", report.rows.empty() ? nlohmann::json(nullptr) : report.rows.front().hyperparameters},
          {"eval_note", report.eval_note},
          {"notes", {kScheduleNote}}};
}

std::string format_grid(const GridReport& report, bool optimizer_comparison) {
  std::string out = fmt::format("{:<22} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6}  {}\n", "model (dev split)", "P", "R",
                                "F1", "P(pos)", "R(pos)", "F1(pos)", "OOC", "status");
  for (const auto& r : report.rows) {
    const auto label = fmt::format("{} ({})", to_string(r.optimizer), fraction_label(r.dev_fraction));
    if (r.ok) {
      out += fmt::format("{:<22} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6}  ok ({}, epoch {})\n", label,
                         format_metric(r.macro.precision), format_metric(r.macro.recall), format_metric(r.macro.f1),
                         format_metric(r.positive.precision), format_metric(r.positive.recall),
                         format_metric(r.positive.f1), format_metric(r.out_of_class_rate), r.eval_split, r.best_epoch);
    } else {
      out += fmt::format("{:<22} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6}  failed: {}\n", label, "-", "-", "-", "-",
                         "-", "-", "-", r.error);
    }
  }
  out += fmt::format("hyperparameters constant across rows: {}\n", report.hyperparameters_constant ? "yes" : "no");
  for (const auto& k : report.differing_keys) {
    out += fmt::format("  differs: {}\n", k);
  }
  out += fmt::format("note: {}\n", report.eval_note);
  if (optimizer_comparison && report.rows.size() == 2 && report.rows[0].ok && report.rows[1].ok) {
    const auto& a = report.rows[0];
    const auto& b = report.rows[1];
    out += fmt::format("comparison: macro F1 {} {} vs {} {} (delta {:+.4f})\n", to_string(a.optimizer),
                       format_metric(a.macro.f1), to_string(b.optimizer), format_metric(b.macro.f1),
                       a.macro.f1 - b.macro.f1);
  }
  out += fmt::format("note: {}\n", kScheduleNote);
  return out;
}

}  // namespace pcld
