// pcld: command-line front end for the pcldetect library.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcld/checkpoint.hpp"
#include "pcld/corpus.hpp"
#include "pcld/digest.hpp"
#include "pcld/error.hpp"
#include "pcld/experiment.hpp"
#include "pcld/metrics.hpp"
#include "pcld/predictor.hpp"
#include "pcld/splitter.hpp"
#include "pcld/textprep.hpp"
#include "pcld/tokenizer.hpp"
#include "pcld/trainer.hpp"

namespace fs = std::filesystem;
using namespace pcld;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kTraining = 3 };

struct CorpusFlags {
  std::size_t skip_lines = 0;
  bool no_labels = false;

  ParseOptions options() const {
    ParseOptions o;
    o.skip_lines = skip_lines;
    o.has_labels = !no_labels;
    return o;
  }
};

void add_corpus_flags(CLI::App* cmd, CorpusFlags& flags) {
  cmd->add_option("--skip-lines", flags.skip_lines, "Leading lines to ignore (disclaimer/header)");
  cmd->add_flag("--no-labels", flags.no_labels, "Input has no label column");
}

std::vector<ParagraphRecord> load_corpus(const fs::path& path, const CorpusFlags& flags) {
  return parse_corpus(read_file(path), flags.options());
}

void print(const std::string& s) { std::fputs(s.c_str(), stdout); }

// Flags that may override an experiment config file. Unset means "keep".
struct ExperimentFlags {
  std::string config_path;
  std::optional<std::string> train_file;
  std::optional<std::string> test_file;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::vector<double> dev_fractions;
  std::vector<std::string> optimizers;
  std::optional<int> fallback_class;
  std::optional<std::size_t> skip_lines;
  bool unlabeled_test = false;
  std::optional<std::string> holdout_file;
  std::vector<std::string> holdout_ids;
  bool stratify = false;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<double> peak_lr;
  std::optional<double> weight_decay;
  std::optional<std::size_t> d_model;
  std::optional<std::size_t> n_heads;
  std::optional<std::size_t> d_ff;
  std::optional<std::size_t> layers;
  std::optional<std::size_t> max_vocab;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--config", f.config_path, "Experiment config JSON (or a run manifest.json)");
  cmd->add_option("--train-file", f.train_file, "Labeled training TSV");
  cmd->add_option("--test-file", f.test_file, "Evaluation TSV");
  cmd->add_flag("--unlabeled-test", f.unlabeled_test, "Test file has no label column");
  cmd->add_option("--output-dir,-o", f.output_dir, "Directory for run artifacts");
  cmd->add_option("--seed", f.seed, "Global seed (split s, init s+1, batch order s+2)");
  cmd->add_option("--dev-fraction", f.dev_fractions, "Dev fraction(s) in (0, 1)");
  cmd->add_option("--optimizer", f.optimizers, "adam and/or adamw");
  cmd->add_option("--fallback-class", f.fallback_class, "Label for out-of-class outputs")
      ->check(CLI::IsMember({0, 1}));
  cmd->add_option("--skip-lines", f.skip_lines, "Leading lines to skip in the train file");
  cmd->add_option("--holdout-file", f.holdout_file, "File of par_ids forced into dev");
  cmd->add_option("--holdout-id", f.holdout_ids, "par_id forced into dev (repeatable)");
  cmd->add_flag("--stratify", f.stratify, "Per-class dev quotas");
  cmd->add_option("--epochs", f.epochs);
  cmd->add_option("--batch-size", f.batch_size);
  cmd->add_option("--lr", f.peak_lr, "Peak learning rate");
  cmd->add_option("--weight-decay", f.weight_decay, "AdamW decoupled decay");
  cmd->add_option("--d-model", f.d_model);
  cmd->add_option("--heads", f.n_heads);
  cmd->add_option("--d-ff", f.d_ff);
  cmd->add_option("--layers", f.layers, "Encoder and decoder depth");
  cmd->add_option("--max-vocab", f.max_vocab);
}

ExperimentConfig resolve_experiment(const ExperimentFlags& f, bool ablation_defaults) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : load_experiment_config(f.config_path);
  if (f.config_path.empty() && ablation_defaults) {
    c.dev_fractions.assign(kAblationDevFractions.begin(), kAblationDevFractions.end());
  }
  if (f.train_file) c.train_file = *f.train_file;
  if (f.test_file) c.test_file = *f.test_file;
  if (f.unlabeled_test) c.test_has_labels = false;
  if (f.output_dir) c.output_dir = *f.output_dir;
  if (f.seed) c.seed = *f.seed;
  if (!f.dev_fractions.empty()) c.dev_fractions = f.dev_fractions;
  if (!f.optimizers.empty()) {
    c.optimizers.clear();
    for (const auto& name : f.optimizers) {
      c.optimizers.push_back(parse_optimizer(name));
    }
  }
  if (f.fallback_class) c.fallback_class = *f.fallback_class;
  if (f.skip_lines) c.skip_lines = *f.skip_lines;
  if (f.holdout_file) c.holdout_preset = *f.holdout_file;
  if (!f.holdout_ids.empty()) c.holdout_ids = f.holdout_ids;
  if (f.stratify) c.stratify = true;
  if (f.epochs) c.train.epochs = *f.epochs;
  if (f.batch_size) c.train.batch_size = *f.batch_size;
  if (f.peak_lr) c.train.peak_lr = *f.peak_lr;
  if (f.weight_decay) c.train.weight_decay = *f.weight_decay;
  if (f.d_model) c.model.d_model = *f.d_model;
  if (f.n_heads) c.model.n_heads = *f.n_heads;
  if (f.d_ff) c.model.d_ff = *f.d_ff;
  if (f.layers) c.model.n_layers_enc = c.model.n_layers_dec = *f.layers;
  if (f.max_vocab) c.max_vocab = *f.max_vocab;
  c.validate();
  return c;
}

// synth -------------------------------------------------------------------

struct SynthArgs {
  std::size_t n = 32;
  double pos_rate = 0.5;
  std::uint64_t seed = 13;
  std::string out;
  bool no_labels = false;
};

int cmd_synth(const SynthArgs& a) {
  auto records = generate_synthetic(a.n, a.pos_rate, a.seed);
  if (a.no_labels) {
    for (auto& r : records) {
      r.orig_label.reset();
      r.binary_label.reset();
    }
  }
  const auto tsv = serialize_corpus(records);
  if (a.out.empty()) {
    print(tsv);
  } else {
    write_file(a.out, tsv);
    const auto s = corpus_stats(records);
    fmt::print(stderr, "wrote {} records ({} neg, {} pos) to {}\n", s.total, s.neg, s.pos, a.out);
  }
  return kOk;
}

// ingest ------------------------------------------------------------------

struct IngestArgs {
  std::string input;
  CorpusFlags corpus;
  std::string json_out;
  std::string tsv_out;
};

int cmd_ingest(const IngestArgs& a) {
  const auto records = load_corpus(a.input, a.corpus);
  nlohmann::json j{{"input", a.input}, {"sha256", sha256_file(a.input)}, {"records", records.size()}};
  if (!a.corpus.no_labels) {
    const auto s = corpus_stats(records);
    j["neg"] = s.neg;
    j["pos"] = s.pos;
    fmt::print("records: {}\nnegative (labels 0-1): {}\npositive (labels 2-4): {}\n", s.total, s.neg, s.pos);
    fmt::print("positive rate: {}\n", s.total ? format_metric(static_cast<double>(s.pos) / s.total) : "-");
  } else {
    fmt::print("records: {} (unlabeled)\n", records.size());
  }
  j["reference_labeled_total"] = kReportedLabeledTotal;
  j["reference_dataset_paragraphs"] = kDatasetParagraphs;
  if (records.size() == kReportedLabeledTotal || records.size() == kDatasetParagraphs) {
    fmt::print("matches reference count {}\n", records.size());
  } else {
    fmt::print("note: reference counts are {} labeled / {} paragraphs; this file has {}\n", kReportedLabeledTotal,
               kDatasetParagraphs, records.size());
  }
  if (!a.json_out.empty()) {
    write_file(a.json_out, j.dump(2) + "\n");
  }
  if (!a.tsv_out.empty()) {
    write_file(a.tsv_out, serialize_corpus(records));
  }
  return kOk;
}

// clean -------------------------------------------------------------------

struct CleanArgs {
  std::string input;
  std::string output;
  std::string report;
  CorpusFlags corpus;
};

int cmd_clean(const CleanArgs& a) {
  auto records = load_corpus(a.input, a.corpus);
  std::string sidecar;
  CleaningReport total;
  for (auto& r : records) {
    auto res = clean(r.text);
    r.text = std::move(res.text);
    total += res.report;
    sidecar += nlohmann::json{{"par_id", r.par_id},
                              {"emails_removed", res.report.emails_removed},
                              {"urls_removed", res.report.urls_removed},
                              {"ips_removed", res.report.ips_removed},
                              {"chars_dropped", res.report.chars_dropped}}
                   .dump() +
               "\n";
  }
  write_file(a.output, serialize_corpus(records));
  const auto report_path = a.report.empty() ? a.output + ".report.jsonl" : a.report;
  write_file(report_path, sidecar);
  fmt::print("cleaned {} records: {} emails, {} urls, {} ips removed; {} chars dropped\n", records.size(),
             total.emails_removed, total.urls_removed, total.ips_removed, total.chars_dropped);
  return kOk;
}

// split -------------------------------------------------------------------

struct SplitArgs {
  std::string input;
  std::string out_dir = "split";
  double dev_fraction = 0.10;
  std::uint64_t seed = 13;
  std::string holdout_file;
  std::vector<std::string> holdout_ids;
  bool stratify = false;
  std::string stage = "cleaned";
  CorpusFlags corpus;
};

int cmd_split(const SplitArgs& a) {
  const auto bytes = read_file(a.input);
  const auto records = parse_corpus(bytes, a.corpus.options());
  SplitSpec spec;
  spec.dev_fraction = a.dev_fraction;
  spec.seed = a.seed;
  spec.stratify = a.stratify;
  spec.holdout_ids = a.holdout_ids;
  if (!a.holdout_file.empty()) {
    for (auto& id : parse_holdout_preset(read_file(a.holdout_file))) {
      spec.holdout_ids.push_back(std::move(id));
    }
  }
  const auto m = write_split(records, spec, sha256_hex(bytes), a.stage, a.out_dir);
  fmt::print("train {} / dev {} written to {}\n", m["sizes"]["train"].get<std::size_t>(),
             m["sizes"]["dev"].get<std::size_t>(), a.out_dir);
  return kOk;
}

// train -------------------------------------------------------------------

struct TrainArgs {
  std::string train_file;
  std::string dev_file;
  std::string out_dir = "model";
  std::string optimizer = "adam";
  std::uint64_t seed = 13;
  std::size_t epochs = 3;
  std::size_t batch_size = 16;
  double peak_lr = 2e-4;
  double weight_decay = 0.01;
  std::size_t max_vocab = 8000;
  std::size_t max_source_tokens = kDefaultMaxSourceTokens;
  std::string config_path;
};

int cmd_train(const TrainArgs& a, const CLI::App& cmd) {
  ModelConfig mc;
  TrainConfig tc;
  std::size_t max_vocab = a.max_vocab;
  std::size_t max_source_tokens = a.max_source_tokens;
  std::uint64_t seed = a.seed;
  if (!a.config_path.empty()) {
    const auto c = load_experiment_config(a.config_path);
    mc = c.model;
    tc = c.train;
    if (!c.optimizers.empty()) tc.optimizer = c.optimizers.front();
    if (cmd.count("--max-vocab") == 0) max_vocab = c.max_vocab;
    if (cmd.count("--max-source-tokens") == 0) max_source_tokens = c.max_source_tokens;
    if (cmd.count("--seed") == 0) seed = c.seed;
  }
  if (a.config_path.empty() || cmd.count("--optimizer")) tc.optimizer = parse_optimizer(a.optimizer);
  if (a.config_path.empty() || cmd.count("--epochs")) tc.epochs = a.epochs;
  if (a.config_path.empty() || cmd.count("--batch-size")) tc.batch_size = a.batch_size;
  if (a.config_path.empty() || cmd.count("--lr")) tc.peak_lr = a.peak_lr;
  if (a.config_path.empty() || cmd.count("--weight-decay")) tc.weight_decay = a.weight_decay;
  mc.seed = seed + 1;
  tc.seed = seed + 2;

  const auto train_records = parse_corpus(read_file(a.train_file));
  const auto dev_records = parse_corpus(read_file(a.dev_file));
  std::vector<std::string> texts;
  for (const auto& r : train_records) {
    texts.push_back(r.text);
  }
  const auto vocab = build_vocab(texts, max_vocab);
  mc.vocab_size = vocab.size();
  mc.max_seq_len = std::max(mc.max_seq_len, max_source_tokens);
  const auto outcome = train(mc, tc, encode_examples(train_records, vocab, max_source_tokens),
                             encode_examples(dev_records, vocab, max_source_tokens), vocab, [](const EpochLog& e) {
                               fmt::print("epoch {}: train loss {:.4f}, dev loss {:.4f}, dev acc {}, ooc {}\n",
                                          e.epoch, e.train_loss, e.dev_loss, format_metric(e.dev_accuracy),
                                          format_metric(e.dev_out_of_class_rate));
                               return true;
                             });
  const fs::path out(a.out_dir);
  save_checkpoint(outcome.best, out / "checkpoint.bin");
  write_file(out / "vocab.txt", vocab.serialize());
  nlohmann::json log = nlohmann::json::array();
  for (const auto& e : outcome.history) {
    log.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"dev_loss", e.dev_loss},
                   {"dev_accuracy", e.dev_accuracy}, {"dev_out_of_class_rate", e.dev_out_of_class_rate}});
  }
  write_file(out / "training_log.json",
             nlohmann::json{{"history", log}, {"best_epoch", outcome.best.epoch}, {"max_source_tokens", max_source_tokens}}
                     .dump(2) +
                 "\n");
  fmt::print("best epoch {} (dev loss {:.4f}); checkpoint in {}\n", outcome.best.epoch, outcome.best.val_loss,
             out.string());
  return kOk;
}

// predict -----------------------------------------------------------------

struct PredictArgs {
  std::string checkpoint;
  std::string vocab;
  std::string input;
  std::string output = "predictions.txt";
  std::string audit;
  int fallback_class = 0;
  std::size_t max_source_tokens = kDefaultMaxSourceTokens;
  CorpusFlags corpus;
};

int cmd_predict(const PredictArgs& a) {
  const auto ckpt = load_checkpoint(a.checkpoint);
  const auto vocab = Vocabulary::parse(read_file(a.vocab));
  const auto records = load_corpus(a.input, a.corpus);
  PredictOptions opts;
  opts.fallback_class = a.fallback_class;
  opts.max_source_tokens = a.max_source_tokens;
  const auto batch = predict_records(ckpt, vocab, records, opts);
  write_file(a.output, format_submission(batch.predictions));
  write_file(a.audit.empty() ? a.output + ".audit.jsonl" : a.audit, format_audit(batch.predictions));
  fmt::print("{} predictions, out-of-class rate {}\n", batch.predictions.size(),
             format_metric(batch.out_of_class_rate));
  return kOk;
}

// evaluate ----------------------------------------------------------------

struct EvaluateArgs {
  std::string predictions;
  std::string gold;
  std::string json_out;
  std::string svg_out;
  std::string errors_out;
  CorpusFlags corpus;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const auto preds = parse_submission(read_file(a.predictions));
  const auto records = load_corpus(a.gold, a.corpus);
  const auto golds = gold_labels(records);
  if (preds.size() != golds.size()) {
    throw DataError(fmt::format("{} predictions but {} gold records", preds.size(), golds.size()));
  }
  const auto report = build_report(confusion(preds, golds));
  print(format_report(report));
  if (!a.json_out.empty()) {
    write_file(a.json_out, report_to_json(report).dump(2) + "\n");
  }
  if (!a.svg_out.empty()) {
    write_file(a.svg_out, confusion_svg(report.confusion));
  }
  if (!a.errors_out.empty()) {
    std::vector<Prediction> as_preds;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      as_preds.push_back({records[i].par_id, std::to_string(preds[i]), preds[i], true});
    }
    write_file(a.errors_out, format_error_table(error_table(as_preds, records, true)));
  }
  return kOk;
}

// run / ablate / compare-optimizers ---------------------------------------

int cmd_run(const ExperimentFlags& f) {
  const auto config = resolve_experiment(f, false);
  const auto r = run_pipeline(config);
  print(fmt::format("run directory: {}\nbest epoch: {}\n", r.run_dir.string(), r.best_epoch));
  print(fmt::format("dev\n{}", format_report(r.dev_metrics)));
  print(fmt::format("dev out-of-class rate: {}\n", format_metric(r.dev_out_of_class_rate)));
  if (r.test_metrics) {
    print(fmt::format("test\n{}", format_report(*r.test_metrics)));
    print(fmt::format("test out-of-class rate: {}\n", format_metric(r.test_out_of_class_rate)));
  }
  return kOk;
}

int grid_exit(const GridReport& report) {
  for (const auto& row : report.rows) {
    if (!row.ok) {
      return kTraining;
    }
  }
  return report.hyperparameters_constant ? kOk : kUsage;
}

int cmd_ablate(const ExperimentFlags& f) {
  const auto report = run_ablation(resolve_experiment(f, true));
  print(format_grid(report, false));
  return grid_exit(report);
}

int cmd_compare(const ExperimentFlags& f) {
  auto config = resolve_experiment(f, false);
  if (f.optimizers.empty() && f.config_path.empty()) {
    config.optimizers = {OptimizerKind::adam, OptimizerKind::adamw};
  }
  const auto report = compare_optimizers(config);
  print(format_grid(report, true));
  return grid_exit(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pcld: text-to-text PCL detection at desk scale"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  c_synth->add_option("-n,--count", synth.n, "Number of records");
  c_synth->add_option("--pos-rate", synth.pos_rate, "Positive fraction");
  c_synth->add_option("--seed", synth.seed);
  c_synth->add_option("--out,-o", synth.out, "Output TSV (stdout if omitted)");
  c_synth->add_flag("--no-labels", synth.no_labels, "Omit the label column");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse a TSV corpus and report label statistics");
  c_ingest->add_option("input", ingest.input)->required();
  c_ingest->add_option("--json", ingest.json_out, "Write statistics as JSON");
  c_ingest->add_option("--normalized", ingest.tsv_out, "Write the parsed corpus in canonical column order");
  add_corpus_flags(c_ingest, ingest.corpus);

  CleanArgs cleaning;
  auto* c_clean = app.add_subcommand("clean", "Apply the text cleaning pipeline to a TSV corpus");
  c_clean->alias("clean-corpus");
  c_clean->add_option("input", cleaning.input)->required();
  c_clean->add_option("--out,-o", cleaning.output, "Cleaned TSV")->required();
  c_clean->add_option("--report", cleaning.report, "JSONL sidecar (default <out>.report.jsonl)");
  add_corpus_flags(c_clean, cleaning.corpus);

  SplitArgs splitting;
  auto* c_split = app.add_subcommand("split", "Seeded train/dev split with optional holdout ids");
  c_split->add_option("input", splitting.input)->required();
  c_split->add_option("--out-dir,-o", splitting.out_dir);
  c_split->add_option("--dev-fraction", splitting.dev_fraction);
  c_split->add_option("--seed", splitting.seed);
  c_split->add_option("--holdout-file", splitting.holdout_file, "File of par_ids forced into dev");
  c_split->add_option("--holdout-id", splitting.holdout_ids, "par_id forced into dev (repeatable)");
  c_split->add_flag("--stratify", splitting.stratify);
  c_split->add_option("--stage", splitting.stage, "Recorded in the manifest (e.g. cleaned, raw)");
  add_corpus_flags(c_split, splitting.corpus);

  TrainArgs training;
  auto* c_train = app.add_subcommand("train", "Train on a train/dev TSV pair and save the best checkpoint");
  c_train->add_option("--train", training.train_file)->required();
  c_train->add_option("--dev", training.dev_file)->required();
  c_train->add_option("--out-dir,-o", training.out_dir);
  c_train->add_option("--optimizer", training.optimizer)->check(CLI::IsMember({"adam", "adamw"}));
  c_train->add_option("--seed", training.seed);
  c_train->add_option("--epochs", training.epochs);
  c_train->add_option("--batch-size", training.batch_size);
  c_train->add_option("--lr", training.peak_lr);
  c_train->add_option("--weight-decay", training.weight_decay);
  c_train->add_option("--max-vocab", training.max_vocab);
  c_train->add_option("--max-source-tokens", training.max_source_tokens);
  c_train->add_option("--config", training.config_path, "Take model/train settings from a config");

  PredictArgs predicting;
  auto* c_predict = app.add_subcommand("predict", "Greedy-decode labels with out-of-class correction");
  c_predict->add_option("--checkpoint", predicting.checkpoint)->required();
  c_predict->add_option("--vocab", predicting.vocab)->required();
  c_predict->add_option("input", predicting.input)->required();
  c_predict->add_option("--out,-o", predicting.output);
  c_predict->add_option("--audit", predicting.audit, "JSONL audit (default <out>.audit.jsonl)");
  c_predict->add_option("--fallback-class", predicting.fallback_class)->check(CLI::IsMember({0, 1}));
  c_predict->add_option("--max-source-tokens", predicting.max_source_tokens);
  add_corpus_flags(c_predict, predicting.corpus);

  EvaluateArgs evaluating;
  auto* c_eval = app.add_subcommand("evaluate", "Score a predictions file against a labeled TSV");
  c_eval->add_option("--predictions", evaluating.predictions)->required();
  c_eval->add_option("--gold", evaluating.gold)->required();
  c_eval->add_option("--json", evaluating.json_out);
  c_eval->add_option("--svg", evaluating.svg_out, "Confusion matrix figure");
  c_eval->add_option("--errors", evaluating.errors_out, "Disagreement table");
  add_corpus_flags(c_eval, evaluating.corpus);

  ExperimentFlags run_flags;
  auto* c_run = app.add_subcommand("run", "Full pipeline for one optimizer and dev fraction");
  add_experiment_flags(c_run, run_flags);

  ExperimentFlags ablate_flags;
  auto* c_ablate = app.add_subcommand("ablate", "Retrain per dev fraction (default 5/10/15/20%)");
  add_experiment_flags(c_ablate, ablate_flags);

  ExperimentFlags compare_flags;
  auto* c_compare = app.add_subcommand("compare-optimizers", "Adam vs AdamW on a shared split");
  add_experiment_flags(c_compare, compare_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_synth) return cmd_synth(synth);
    if (*c_ingest) return cmd_ingest(ingest);
    if (*c_clean) return cmd_clean(cleaning);
    if (*c_split) return cmd_split(splitting);
    if (*c_train) return cmd_train(training, *c_train);
    if (*c_predict) return cmd_predict(predicting);
    if (*c_eval) return cmd_evaluate(evaluating);
    if (*c_run) return cmd_run(run_flags);
    if (*c_ablate) return cmd_ablate(ablate_flags);
    if (*c_compare) return cmd_compare(compare_flags);
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const DataError& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kData;
  } catch (const TrainingError& e) {
    fmt::print(stderr, "training failed: {}\n", e.what());
    return kTraining;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kData;
  }
  return kUsage;
}
