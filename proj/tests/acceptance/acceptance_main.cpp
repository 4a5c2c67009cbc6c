// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances and budgets are the constants below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "clean_cases.hpp"
#include "pcld/corpus.hpp"
#include "pcld/digest.hpp"
#include "pcld/error.hpp"
#include "pcld/experiment.hpp"
#include "pcld/metrics.hpp"
#include "pcld/model.hpp"
#include "pcld/predictor.hpp"
#include "pcld/random.hpp"
#include "pcld/splitter.hpp"
#include "pcld/textprep.hpp"
#include "pcld/tokenizer.hpp"
#include "pcld/trainer.hpp"
#include "support.hpp"

namespace {

using namespace pcld;
using Clock = std::chrono::steady_clock;

constexpr double kFdStep = 1e-5;
constexpr double kFdRelTol = 1e-3;
constexpr double kFdAbsFloor = 1e-8;
constexpr double kFdBudgetSec = 60.0;

constexpr std::size_t kOverfitExamples = 32;
constexpr std::size_t kOverfitEpochs = 200;
constexpr double kOverfitLossMax = 0.05;
constexpr double kOverfitBudgetSec = 120.0;

constexpr int kDecodeFuzzCases = 10000;
constexpr int kMetricPairs = 1000;
constexpr double kMetricTol = 1e-12;
constexpr int kCleanFuzzCases = 1000;
constexpr double kLrTol = 1e-15;
constexpr double kAdamTol = 1e-10;
constexpr double kAblationBudgetSec = 300.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1: central differences against the analytic gradient, every entry.
Outcome gradient_check() {
  const auto t0 = Clock::now();
  const auto config = testing::tiny_config(32, 11);
  const auto params = testing::randomized_params(config, 12);
  Rng rng(13);
  std::vector<Seq2SeqExample> batch;
  for (std::size_t len : {5, 8}) {
    batch.push_back(make_example(testing::random_tokens(rng, len, 32), testing::random_tokens(rng, 3, 32)));
  }
  ModelParams grads;
  loss_and_gradients(params, batch, &grads);
  const auto r = testing::finite_difference_check(params, batch, grads, kFdStep, kFdRelTol, kFdAbsFloor);
  const double secs = seconds_since(t0);

  // The same check must reject a gradient with one corrupted entry.
  auto corrupted = grads;
  corrupted.decoder[1].cross_attn.wk(3, 5) += 1e-4;
  const auto probe = testing::finite_difference_check(params, batch, corrupted, kFdStep, kFdRelTol, kFdAbsFloor);

  Outcome o;
  o.pass = r.failures == 0 && r.checked == parameter_count(params) && probe.failures == 1 && secs < kFdBudgetSec;
  o.detail = fmt::format("{} entries, {} failures, max |a-n| {:.1e} (max |grad| {:.1e}), corrupted probe {} "
                         "failure(s), {:.1f}s",
                         r.checked, r.failures, r.max_abs_diff, r.max_abs_grad, probe.failures, secs);
  return o;
}

// 2: default model and optimizer settings memorise a small synthetic set.
Outcome overfit() {
  const auto t0 = Clock::now();
  const auto records = testing::cleaned_synthetic(kOverfitExamples, 0.5, 7);
  const auto vocab = build_vocab(testing::texts_of(records), ExperimentConfig{}.max_vocab);
  const auto set = encode_examples(records, vocab, kDefaultMaxSourceTokens);
  ModelConfig mc;
  mc.seed = 1;
  TrainConfig tc;
  tc.epochs = kOverfitEpochs;
  tc.seed = 2;
  const auto out = train(mc, tc, set, set, vocab);
  const double loss = loss_and_gradients(out.best.params, set, nullptr);
  const auto preds = predict_records(out.best.params, vocab, records);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    correct += preds.predictions[i].label == *records[i].binary_label ? 1 : 0;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = correct == records.size() && loss < kOverfitLossMax && secs < kOverfitBudgetSec;
  o.detail = fmt::format("accuracy {}/{}, loss {:.4f} (best epoch {}), {:.1f}s", correct, records.size(), loss,
                         out.best.epoch, secs);
  return o;
}

std::string ascii_trim(const std::string& s) {
  const char* ws = " \t\n\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) {
    return "";
  }
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// 3: arbitrary decoded strings always map to a legal label.
Outcome decode_fuzz() {
  static const std::vector<std::string> pieces = {"0", "1", "2", " ", "\t", "\n", "a", "</s>", "<pad>", "01",
                                                  "-1", "1.0", "\xC3\xA9", "", "10", "\r", "x y"};
  Rng rng(31);
  std::size_t bad = 0, in_class = 0;
  for (int i = 0; i < kDecodeFuzzCases; ++i) {
    std::string s;
    const auto n = rng.uniform_below(6);
    for (std::uint64_t k = 0; k < n; ++k) {
      s += pieces[rng.uniform_below(pieces.size())];
    }
    const int fallback = static_cast<int>(rng.uniform_below(2));
    const auto d = correct_out_of_class(s, fallback);
    const auto t = ascii_trim(s);
    const bool expect_in = t == "0" || t == "1";
    const int expect_label = expect_in ? t[0] - '0' : fallback;
    if ((d.label != 0 && d.label != 1) || d.in_class != expect_in || d.label != expect_label) {
      ++bad;
    }
    in_class += d.in_class ? 1 : 0;
  }
  return {bad == 0, fmt::format("{} strings, {} inconsistent, {} in class", kDecodeFuzzCases, bad, in_class)};
}

// Per-class P/R/F1 by direct counting over the label lists.
PrecisionRecallF1 brute_prf(const std::vector<int>& p, const std::vector<int>& g, int cls) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == cls && g[i] == cls) tp += 1;
    if (p[i] == cls && g[i] != cls) fp += 1;
    if (p[i] != cls && g[i] == cls) fn += 1;
  }
  PrecisionRecallF1 r;
  r.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

// 4: metrics against a counting oracle, plus the rounding anchor.
Outcome metrics_oracle() {
  Rng rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < kMetricPairs; ++trial) {
    const auto n = 1 + rng.uniform_below(60);
    const double bias = rng.uniform01();
    std::vector<int> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.uniform01() < bias ? 1 : 0;
      g[i] = static_cast<int>(rng.uniform_below(2));
    }
    const auto r = build_report(confusion(p, g));
    const auto neg = brute_prf(p, g, 0), pos = brute_prf(p, g, 1);
    const double expected[] = {neg.precision, neg.recall, neg.f1, pos.precision, pos.recall, pos.f1,
                               (neg.precision + pos.precision) / 2, (neg.recall + pos.recall) / 2,
                               (neg.f1 + pos.f1) / 2};
    const double got[] = {r.per_class[0].scores.precision, r.per_class[0].scores.recall, r.per_class[0].scores.f1,
                          r.per_class[1].scores.precision, r.per_class[1].scores.recall, r.per_class[1].scores.f1,
                          r.macro.precision, r.macro.recall, r.macro.f1};
    for (std::size_t k = 0; k < std::size(got); ++k) {
      worst = std::max(worst, std::abs(got[k] - expected[k]));
    }
  }
  const auto anchor = format_metric(macro({0, 0, 0.9549}, {0, 0, 0.5260}).f1);
  return {worst <= kMetricTol && anchor == "0.7405",
          fmt::format("{} pairs, max deviation {:.1e}, macro(0.9549, 0.5260) = {}", kMetricPairs, worst, anchor)};
}

// 5: every original label value, plus the rejected neighbours.
Outcome label_map() {
  const int expected[] = {0, 0, 1, 1, 1};
  std::size_t bad = 0;
  for (int v = 0; v <= 4; ++v) {
    bad += map_label(v) == expected[v] ? 0 : 1;
  }
  for (int v : {-100, -1, 5, 6, 100}) {
    try {
      map_label(v);
      ++bad;
    } catch (const DataError&) {
    }
  }
  return {bad == 0, fmt::format("0..4 mapped, out-of-range rejected, {} mismatches", bad)};
}

// 6: golden cleaning pairs and idempotence on fuzzed input.
Outcome cleaning() {
  std::size_t golden_bad = 0;
  for (const auto& [in, out] : testing::golden_clean_pairs()) {
    golden_bad += clean(in).text == out ? 0 : 1;
  }
  Rng rng(61);
  std::size_t not_idem = 0;
  for (int i = 0; i < kCleanFuzzCases; ++i) {
    const auto once = clean(testing::fuzz_text(rng)).text;
    not_idem += clean(once).text == once ? 0 : 1;
  }
  const auto n = testing::golden_clean_pairs().size();
  return {n >= 20 && golden_bad == 0 && not_idem == 0,
          fmt::format("{} golden pairs ({} wrong), {} fuzzed ({} not idempotent)", n, golden_bad, kCleanFuzzCases,
                      not_idem)};
}

std::vector<std::string> ids_of(const std::vector<ParagraphRecord>& records) {
  std::vector<std::string> ids;
  for (const auto& r : records) {
    ids.push_back(r.par_id);
  }
  return ids;
}

// 7: split sizes, partition, determinism and holdout injection.
Outcome splits() {
  std::vector<std::string> problems;
  for (std::size_t n : {10, 100, 10469}) {
    const auto records = generate_synthetic(n, 0.1, n);
    const auto all = ids_of(records);
    const std::set<std::string> universe(all.begin(), all.end());
    for (int pct : {5, 10, 15, 20}) {
      SplitSpec spec;
      spec.dev_fraction = pct / 100.0;
      spec.seed = 7;
      const auto s = split(records, spec);
      const std::size_t want_dev = static_cast<std::size_t>(pct) * n / 100;
      if (s.dev.size() != want_dev || s.train.size() != n - want_dev) {
        problems.push_back(fmt::format("N={} f={}%: dev {} want {}", n, pct, s.dev.size(), want_dev));
      }
      auto joined = ids_of(s.train);
      const auto dev_ids = ids_of(s.dev);
      joined.insert(joined.end(), dev_ids.begin(), dev_ids.end());
      const std::set<std::string> covered(joined.begin(), joined.end());
      if (joined.size() != n || covered != universe) {
        problems.push_back(fmt::format("N={} f={}%: not a partition", n, pct));
      }
      const auto again = split(records, spec);
      if (again.train != s.train || again.dev != s.dev) {
        problems.push_back(fmt::format("N={} f={}%: not deterministic", n, pct));
      }

      if (s.train.size() >= 3) {
        const std::vector<std::string> moved = {s.train[0].par_id, s.train[s.train.size() / 2].par_id,
                                                s.train.back().par_id};
        const auto preset = "# preset\n" + moved[0] + "\n\n" + moved[1] + "\n" + moved[2] + "\n";
        SplitSpec with = spec;
        with.holdout_ids = parse_holdout_preset(preset);
        const auto h = split(records, with);
        const auto h_dev = ids_of(h.dev);
        const std::set<std::string> before(dev_ids.begin(), dev_ids.end());
        std::set<std::string> added;
        for (const auto& id : h_dev) {
          if (!before.contains(id)) {
            added.insert(id);
          }
        }
        const auto h_train = ids_of(h.train);
        const bool none_left = std::none_of(h_train.begin(), h_train.end(), [&](const auto& id) {
          return std::find(moved.begin(), moved.end(), id) != moved.end();
        });
        if (added != std::set<std::string>(moved.begin(), moved.end()) ||
            h_dev.size() != s.dev.size() + moved.size() || !none_left || h_train.size() != s.train.size() - 3) {
          problems.push_back(fmt::format("N={} f={}%: holdout moved the wrong records", n, pct));
        }
      }
    }
  }
  return {problems.empty(),
          problems.empty() ? "12 size/partition/determinism cells and holdout injection hold"
                           : fmt::format("{} problems, first: {}", problems.size(), problems.front())};
}

// 8: schedule anchors and single optimizer steps from 1.0.
Outcome optimizers() {
  std::vector<std::string> problems;
  TrainConfig tc;
  tc.peak_lr = 2e-4;
  tc.warmup_steps = 100;
  tc.total_steps = 1000;
  const std::pair<std::size_t, double> anchors[] = {{0, 0.0}, {50, 1e-4}, {100, 2e-4}, {550, 1e-4}, {1000, 0.0}};
  for (const auto& [step, want] : anchors) {
    const double got = lr_at(step, tc);
    if (std::abs(got - want) > kLrTol) {
      problems.push_back(fmt::format("lr_at({}) = {:.17g}", step, got));
    }
  }
  TrainConfig short_tc = tc;
  short_tc.total_steps = 300;
  if (std::abs(lr_at(200, short_tc) - 1e-4) > kLrTol) {
    problems.push_back(fmt::format("lr_at(200 of 300) = {:.17g}", lr_at(200, short_tc)));
  }

  ModelParams params = init_params(testing::tiny_config(8, 1));
  for (auto& a : named_arrays(params)) {
    std::fill(a.values.begin(), a.values.end(), 1.0);
  }
  ModelParams ones = zeros_like(params);
  for (auto& a : named_arrays(ones)) {
    std::fill(a.values.begin(), a.values.end(), 1.0);
  }
  auto adam = params;
  auto adam_state = init_optimizer_state(adam);
  adam_step(adam, ones, adam_state, 0.1);
  auto adamw = params;
  auto adamw_state = init_optimizer_state(adamw);
  adamw_step(adamw, zeros_like(params), adamw_state, 0.1, 0.01);
  // Hand evaluation with m_hat = v_hat = 1: 1 - lr / (sqrt(1) + eps), about 0.9.
  const double adam_expected = 1.0 - 0.1 / (1.0 + 1e-8);
  double adam_dev = 0.0, adamw_dev = 0.0;
  for (const auto& a : named_arrays(std::as_const(adam))) {
    for (double x : a.values) adam_dev = std::max(adam_dev, std::abs(x - adam_expected));
  }
  for (const auto& a : named_arrays(std::as_const(adamw))) {
    for (double x : a.values) adamw_dev = std::max(adamw_dev, std::abs(x - 0.999));
  }
  if (adam_dev > kAdamTol) problems.push_back(fmt::format("adam off by {:.2e}", adam_dev));
  if (adamw_dev > kAdamTol) problems.push_back(fmt::format("adamw off by {:.2e}", adamw_dev));
  return {problems.empty(), problems.empty() ? fmt::format("lr anchors exact, adam 1 -> {:.10f} (hand value off by {:.1e}), "
                                                           "adamw 1 -> 0.999 off by {:.1e}",
                                                           adam_expected, adam_dev, adamw_dev)
                                             : fmt::format("{}", fmt::join(problems, "; "))};
}

ExperimentConfig synthetic_experiment(const testing::TempDir& dir) {
  write_file(dir / "train.tsv", serialize_corpus(generate_synthetic(400, 0.3, 5)));
  write_file(dir / "test.tsv", serialize_corpus(generate_synthetic(100, 0.3, 6)));
  ExperimentConfig c;
  c.train_file = dir / "train.tsv";
  c.test_file = dir / "test.tsv";
  c.output_dir = dir / "out";
  return c;
}

// 9: the dev-fraction grid on a synthetic corpus at default settings.
Outcome ablation() {
  const auto t0 = Clock::now();
  testing::TempDir dir("accept-ablate");
  auto config = synthetic_experiment(dir);
  config.dev_fractions.assign(kAblationDevFractions.begin(), kAblationDevFractions.end());
  const auto grid = run_ablation(config);
  const double secs = seconds_since(t0);
  bool finite = true, ok = true;
  for (const auto& row : grid.rows) {
    ok = ok && row.ok;
    for (double x : {row.macro.precision, row.macro.recall, row.macro.f1, row.positive.f1, row.out_of_class_rate}) {
      finite = finite && std::isfinite(x);
    }
  }
  std::set<std::string> hp;
  for (const auto& row : grid.rows) {
    hp.insert(row.hyperparameters.dump());
  }
  const bool pass =
      grid.rows.size() == 4 && ok && finite && grid.hyperparameters_constant && hp.size() == 1 && secs < kAblationBudgetSec;
  return {pass, fmt::format("{} rows, all ok {}, finite {}, constant {}, {:.1f}s", grid.rows.size(), ok, finite,
                            grid.hyperparameters_constant && hp.size() == 1, secs)};
}

// 10: re-running a manifest reproduces its outputs byte for byte.
Outcome reproducibility() {
  testing::TempDir dir("accept-repro");
  auto config = synthetic_experiment(dir);
  config.train.epochs = 2;
  const auto first = run_pipeline(config);
  const auto replay = load_experiment_config(first.run_dir / "manifest.json");
  const auto a = run_pipeline(replay, replay.optimizers.front(), replay.dev_fractions.front(), dir / "a");
  const auto b = run_pipeline(replay, replay.optimizers.front(), replay.dev_fractions.front(), dir / "b");
  std::vector<std::string> differ;
  for (const char* name : {"metrics.json", "predictions_dev.txt", "predictions_test.txt"}) {
    const auto x = read_file(a.run_dir / name);
    if (x != read_file(b.run_dir / name) || x != read_file(first.run_dir / name)) {
      differ.push_back(name);
    }
  }
  return {differ.empty(), differ.empty() ? "metrics.json and predictions identical across runs"
                                         : fmt::format("differs: {}", fmt::join(differ, ", "))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1 finite-difference gradients", gradient_check},
      {"C2 overfit 32 examples", overfit},
      {"C3 decoded-label fuzz", decode_fuzz},
      {"C4 metrics oracle", metrics_oracle},
      {"C5 label map", label_map},
      {"C6 cleaning goldens and idempotence", cleaning},
      {"C7 splits", splits},
      {"C8 schedule and optimizer steps", optimizers},
      {"C9 dev-fraction ablation", ablation},
      {"C10 byte-identical reruns", reproducibility},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
