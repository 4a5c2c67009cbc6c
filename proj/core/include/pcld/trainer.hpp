#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcld/corpus.hpp"
#include "pcld/model.hpp"
#include "pcld/tokenizer.hpp"

namespace pcld {

enum class OptimizerKind { adam, adamw };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);  ///< Throws UsageError.

/// Optimisation hyperparameters. warmup_steps and total_steps of 0 mean
/// "derive": total = epochs * ceil(|train| / batch_size) and
/// warmup = floor(warmup_fraction * total).
struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::adam;
  double peak_lr = 2e-4;
  std::size_t warmup_steps = 0;
  std::size_t total_steps = 0;
  double warmup_fraction = 0.10;
  std::size_t batch_size = 16;
  std::size_t epochs = 3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;  ///< Used by AdamW only.
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

/// Fills in derived warmup/total steps for a training set of the given size.
TrainConfig resolve_schedule(TrainConfig config, std::size_t train_size);

/// Linear 0 -> peak_lr over [0, warmup_steps], then linear peak_lr -> 0 over
/// [warmup_steps, total_steps]. Throws UsageError for step > total_steps.
double lr_at(std::size_t step, const TrainConfig& config);

struct OptimizerState {
  ModelParams first_moment;
  ModelParams second_moment;
  std::size_t step_count = 0;
};

OptimizerState init_optimizer_state(const ModelParams& params);

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam. Throws TrainingError (leaving params and state
/// untouched) if any gradient is non-finite.
void adam_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr,
               const AdamHyper& hyper = {});

/// Adam with decoupled weight decay: param -= lr * weight_decay * param, then
/// the Adam update.
void adamw_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr,
                double weight_decay, const AdamHyper& hyper = {});

struct Checkpoint {
  ModelParams params;
  TrainConfig train_config;
  std::size_t epoch = 0;  ///< 1-based epoch this snapshot was taken after.
  double val_loss = 0.0;
  std::string vocab_hash;

  const ModelConfig& config() const { return params.config; }
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;  ///< Mean of batch losses over the epoch.
  double dev_loss = 0.0;
  double dev_out_of_class_rate = 0.0;
  double dev_accuracy = 0.0;
  double last_lr = 0.0;
};

struct TrainOutcome {
  Checkpoint best;
  std::vector<EpochLog> history;
};

/// Encodes labeled records as (prefixed source, "label" + EOS) pairs.
std::vector<Seq2SeqExample> encode_examples(const std::vector<ParagraphRecord>& records,
                                            const Vocabulary& vocab, std::size_t max_source_tokens);

/// Epoch loop: each epoch reshuffles the training order (one Rng stream
/// seeded with train_config.seed), steps the optimizer per batch with
/// lr_at(step) for step = 1..total_steps, then scores the dev set. Returns
/// the snapshot with the lowest dev loss; ties keep the earlier epoch.
/// `on_epoch` may return false to stop early.
TrainOutcome train(const ModelConfig& model_config, const TrainConfig& train_config,
                   const std::vector<Seq2SeqExample>& train_set, const std::vector<Seq2SeqExample>& dev_set,
                   const Vocabulary& vocab, const std::function<bool(const EpochLog&)>& on_epoch = {});

/// Selects the index of the minimum loss, earliest on ties.
std::size_t argmin_epoch(const std::vector<double>& dev_losses);

}  // namespace pcld
