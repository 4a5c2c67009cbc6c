#include "pcld/trainer.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "pcld/error.hpp"
#include "pcld/predictor.hpp"
#include "pcld/random.hpp"

namespace pcld {

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::adam ? "adam" : "adamw"; }

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") {
    return OptimizerKind::adam;
  }
  if (name == "adamw") {
    return OptimizerKind::adamw;
  }
  throw UsageError(fmt::format("unknown optimizer '{}' (expected adam or adamw)", name));
}

void TrainConfig::validate() const {
  if (!(peak_lr > 0.0)) {
    throw UsageError("train config: peak_lr must be positive");
  }
  if (batch_size == 0 || epochs == 0) {
    throw UsageError("train config: batch_size and epochs must be at least 1");
  }
  if (total_steps != 0 && warmup_steps > total_steps) {
    throw UsageError(fmt::format("train config: warmup_steps {} exceeds total_steps {}", warmup_steps, total_steps));
  }
  if (!(warmup_fraction >= 0.0 && warmup_fraction <= 1.0)) {
    throw UsageError("train config: warmup_fraction outside [0, 1]");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0 && weight_decay >= 0.0)) {
    throw UsageError("train config: invalid optimizer constants");
  }
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"optimizer", to_string(c.optimizer)},
                     {"peak_lr", c.peak_lr},
                     {"warmup_steps", c.warmup_steps},
                     {"total_steps", c.total_steps},
                     {"warmup_fraction", c.warmup_fraction},
                     {"batch_size", c.batch_size},
                     {"epochs", c.epochs},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"epsilon", c.epsilon},
                     {"weight_decay", c.weight_decay},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  const TrainConfig d;
  c.optimizer = parse_optimizer(j.value("optimizer", to_string(d.optimizer)));
  c.peak_lr = j.value("peak_lr", d.peak_lr);
  c.warmup_steps = j.value("warmup_steps", d.warmup_steps);
  c.total_steps = j.value("total_steps", d.total_steps);
  c.warmup_fraction = j.value("warmup_fraction", d.warmup_fraction);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.epochs = j.value("epochs", d.epochs);
  c.beta1 = j.value("beta1", d.beta1);
  c.beta2 = j.value("beta2", d.beta2);
  c.epsilon = j.value("epsilon", d.epsilon);
  c.weight_decay = j.value("weight_decay", d.weight_decay);
  c.seed = j.value("seed", d.seed);
}

TrainConfig resolve_schedule(TrainConfig config, std::size_t train_size) {
  config.validate();
  if (config.total_steps == 0) {
    const std::size_t batches = (train_size + config.batch_size - 1) / config.batch_size;
    config.total_steps = config.epochs * batches;
  }
  if (config.warmup_steps == 0) {
    config.warmup_steps =
        static_cast<std::size_t>(std::floor(config.warmup_fraction * static_cast<double>(config.total_steps)));
  }
  config.validate();
  return config;
}

double lr_at(std::size_t step, const TrainConfig& config) {
  if (step > config.total_steps) {
    throw UsageError(fmt::format("lr_at: step {} beyond total_steps {}", step, config.total_steps));
  }
  if (config.warmup_steps > config.total_steps) {
    throw UsageError("lr_at: warmup_steps exceeds total_steps");
  }
  const auto s = static_cast<double>(step);
  const auto warmup = static_cast<double>(config.warmup_steps);
  const auto total = static_cast<double>(config.total_steps);
  if (step <= config.warmup_steps && config.warmup_steps > 0) {
    return config.peak_lr * (s / warmup);
  }
  if (config.total_steps == config.warmup_steps) {
    return config.peak_lr;
  }
  return config.peak_lr * ((total - s) / (total - warmup));
}

OptimizerState init_optimizer_state(const ModelParams& params) {
  return {zeros_like(params), zeros_like(params), 0};
}

namespace {

void check_finite_grads(const std::vector<ConstNamedArray>& grads) {
  for (const auto& g : grads) {
    for (const double x : g.values) {
      if (!std::isfinite(x)) {
        throw TrainingError(fmt::format("non-finite gradient in '{}'; step aborted", g.name));
      }
    }
  }
}

void adam_update(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr,
                 double weight_decay, const AdamHyper& hyper) {
  auto p = named_arrays(params);
  const auto g = named_arrays(grads);
  auto m = named_arrays(state.first_moment);
  auto v = named_arrays(state.second_moment);
  if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size()) {
    throw UsageError("optimizer: parameter, gradient and state layouts differ");
  }
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a].values.size() != g[a].values.size() || p[a].values.size() != m[a].values.size() ||
        p[a].values.size() != v[a].values.size()) {
      throw UsageError(fmt::format("optimizer: shape mismatch in '{}'", p[a].name));
    }
  }
  check_finite_grads(g);

  const double t = static_cast<double>(state.step_count + 1);
  const double bc1 = 1.0 - std::pow(hyper.beta1, t);
  const double bc2 = 1.0 - std::pow(hyper.beta2, t);
  for (std::size_t a = 0; a < p.size(); ++a) {
    auto& pv = p[a].values;
    const auto& gv = g[a].values;
    auto& mv = m[a].values;
    auto& vv = v[a].values;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (weight_decay != 0.0) {
        pv[i] -= lr * weight_decay * pv[i];
      }
      mv[i] = hyper.beta1 * mv[i] + (1.0 - hyper.beta1) * gv[i];
      vv[i] = hyper.beta2 * vv[i] + (1.0 - hyper.beta2) * gv[i] * gv[i];
      const double m_hat = mv[i] / bc1;
      const double v_hat = vv[i] / bc2;
      pv[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
    }
  }
  ++state.step_count;
}

}  // namespace

void adam_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr,
               const AdamHyper& hyper) {
  adam_update(params, grads, state, lr, 0.0, hyper);
}

void adamw_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr,
                double weight_decay, const AdamHyper& hyper) {
  adam_update(params, grads, state, lr, weight_decay, hyper);
}

std::vector<Seq2SeqExample> encode_examples(const std::vector<ParagraphRecord>& records,
                                            const Vocabulary& vocab, std::size_t max_source_tokens) {
  std::vector<Seq2SeqExample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!r.binary_label) {
      throw DataError(fmt::format("record '{}' has no label", r.par_id));
    }
    out.push_back(make_example(encode_source(r.text, vocab, max_source_tokens), encode_target(*r.binary_label, vocab)));
  }
  return out;
}

std::size_t argmin_epoch(const std::vector<double>& dev_losses) {
  if (dev_losses.empty()) {
    throw UsageError("argmin_epoch: no epochs");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < dev_losses.size(); ++i) {
    if (dev_losses[i] < dev_losses[best]) {
      best = i;
    }
  }
  return best;
}

TrainOutcome train(const ModelConfig& model_config, const TrainConfig& train_config,
                   const std::vector<Seq2SeqExample>& train_set, const std::vector<Seq2SeqExample>& dev_set,
                   const Vocabulary& vocab, const std::function<bool(const EpochLog&)>& on_epoch) {
  if (train_set.empty()) {
    throw UsageError("train: training set is empty");
  }
  if (dev_set.empty()) {
    throw UsageError("train: dev set is empty, so checkpoint selection is undefined");
  }
  ModelConfig mc = model_config;
  if (mc.vocab_size == 0) {
    mc.vocab_size = vocab.size();
  }
  if (mc.vocab_size != vocab.size()) {
    throw UsageError(fmt::format("train: model vocab_size {} differs from vocabulary size {}", mc.vocab_size,
                                 vocab.size()));
  }
  const TrainConfig tc = resolve_schedule(train_config, train_set.size());
  const AdamHyper hyper{tc.beta1, tc.beta2, tc.epsilon};

  ModelParams params = init_params(mc);
  OptimizerState state = init_optimizer_state(params);
  ModelParams grads = zeros_like(params);

  Rng rng(tc.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const TokenId positive = vocab.label_id(1);
  TrainOutcome outcome;
  bool have_best = false;
  std::size_t step = 0;
  std::vector<Seq2SeqExample> batch;
  batch.reserve(tc.batch_size);

  for (std::size_t epoch = 1; epoch <= tc.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t batches = 0;
    double lr = 0.0;
    for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(start + tc.batch_size, order.size()); ++i) {
        batch.push_back(train_set[order[i]]);
      }
      const double loss = loss_and_gradients(params, batch, &grads);
      if (!std::isfinite(loss)) {
        throw TrainingError(fmt::format("non-finite training loss at step {}", step + 1));
      }
      ++step;
      lr = lr_at(std::min(step, tc.total_steps), tc);
      if (tc.optimizer == OptimizerKind::adam) {
        adam_step(params, grads, state, lr, hyper);
      } else {
        adamw_step(params, grads, state, lr, tc.weight_decay, hyper);
      }
      loss_sum += loss;
      ++batches;
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(batches);
    log.dev_loss = loss_and_gradients(params, dev_set, nullptr);
    log.last_lr = lr;
    std::size_t out_of_class = 0;
    std::size_t correct = 0;
    for (const auto& ex : dev_set) {
      const auto decision = correct_out_of_class(greedy_decode(params, vocab, ex.src));
      out_of_class += decision.in_class ? 0 : 1;
      const int gold = ex.targets.ids.front() == positive ? 1 : 0;
      correct += decision.label == gold ? 1 : 0;
    }
    log.dev_out_of_class_rate = static_cast<double>(out_of_class) / static_cast<double>(dev_set.size());
    log.dev_accuracy = static_cast<double>(correct) / static_cast<double>(dev_set.size());
    if (!std::isfinite(log.dev_loss)) {
      throw TrainingError(fmt::format("non-finite dev loss after epoch {}", epoch));
    }
    outcome.history.push_back(log);

    if (!have_best || log.dev_loss < outcome.best.val_loss) {
      outcome.best = Checkpoint{params, tc, epoch, log.dev_loss, vocab.digest()};
      have_best = true;
    }
    if (on_epoch && !on_epoch(log)) {
      break;
    }
  }
  return outcome;
}

}  // namespace pcld
