#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcld/corpus.hpp"
#include "pcld/metrics.hpp"
#include "pcld/model.hpp"
#include "pcld/splitter.hpp"
#include "pcld/trainer.hpp"

namespace pcld {

inline constexpr std::string_view kVersion = "0.1.0";

/// Everything a run needs. Seeds are derived from `seed`: the split uses
/// seed, model initialisation seed + 1, batch shuffling seed + 2.
struct ExperimentConfig {
  std::filesystem::path train_file;
  std::filesystem::path test_file;  ///< Optional; evaluated when labeled.
  std::filesystem::path output_dir = "runs";
  std::size_t skip_lines = 0;
  bool test_has_labels = true;

  std::vector<double> dev_fractions{0.10};
  std::vector<OptimizerKind> optimizers{OptimizerKind::adam};
  std::uint64_t seed = 13;
  std::vector<std::string> holdout_ids;
  std::filesystem::path holdout_preset;  ///< File of par_ids moved into dev before training.
  bool stratify = false;
  int fallback_class = 0;

  std::size_t max_vocab = 8000;
  std::size_t max_source_tokens = kDefaultMaxSourceTokens;
  TrainConfig train{};
  ModelConfig model{};

  /// Throws UsageError on fractions outside (0, 1), no optimizers, or a bad fallback.
  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// Reads a JSON config. A run manifest is accepted too: its "config" object is used.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunResult {
  std::filesystem::path run_dir;
  nlohmann::json manifest;
  MetricsReport dev_metrics;
  double dev_out_of_class_rate = 0.0;
  std::optional<MetricsReport> test_metrics;
  double test_out_of_class_rate = 0.0;
  std::size_t best_epoch = 0;
  std::vector<EpochLog> history;

  /// Test metrics when the test file is labeled, otherwise dev.
  const MetricsReport& eval_metrics() const { return test_metrics ? *test_metrics : dev_metrics; }
  double eval_out_of_class_rate() const { return test_metrics ? test_out_of_class_rate : dev_out_of_class_rate; }
};

/// ingest -> clean -> split -> train -> predict -> evaluate for one optimizer
/// and dev fraction, writing every artifact plus manifest.json (with SHA-256
/// digests of each artifact) under run_dir. A failing stage rethrows with the
/// stage name prefixed, keeping the error type.
RunResult run_pipeline(const ExperimentConfig& config, OptimizerKind optimizer, double dev_fraction,
                       const std::filesystem::path& run_dir);

/// Runs the first optimizer and first dev fraction into output_dir.
RunResult run_pipeline(const ExperimentConfig& config);

struct GridRow {
  OptimizerKind optimizer = OptimizerKind::adam;
  double dev_fraction = 0.0;
  bool ok = false;
  std::string error;
  std::string eval_split;  ///< "test" or "dev".
  MacroScores macro;
  PrecisionRecallF1 positive;
  double out_of_class_rate = 0.0;
  std::size_t best_epoch = 0;
  std::filesystem::path run_dir;
  nlohmann::json hyperparameters;  ///< Configured (pre-derivation) values, minus fraction and optimizer.
};

struct GridReport {
  std::vector<GridRow> rows;
  bool hyperparameters_constant = true;
  std::vector<std::string> differing_keys;
  std::string eval_note;
};

/// Hyperparameters that must agree across rows of a grid.
nlohmann::json row_hyperparameters(const ExperimentConfig& config);

/// Compares rows' hyperparameter objects key by key.
std::vector<std::string> differing_hyperparameters(const std::vector<nlohmann::json>& rows);

/// Every optimizer x dev fraction, each retrained from scratch under
/// output_dir/ablation/. Row failures are recorded and the grid continues.
/// Writes ablation.json and ablation.txt.
GridReport run_ablation(const ExperimentConfig& config);

/// One row per configured optimizer at the first dev fraction, sharing the
/// split seed. Writes compare.json and compare.txt.
GridReport compare_optimizers(const ExperimentConfig& config);

std::string format_grid(const GridReport& report, bool optimizer_comparison);
nlohmann::json grid_to_json(const GridReport& report);

/// Stand-alone split step: writes train.tsv, dev.tsv and split_manifest.json.
nlohmann::json write_split(const std::vector<ParagraphRecord>& records, const SplitSpec& spec,
                           const std::string& input_digest, const std::string& stage,
                           const std::filesystem::path& out_dir);

std::string fraction_label(double fraction);  ///< 0.05 -> "5%"

}  // namespace pcld
