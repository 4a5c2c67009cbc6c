#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "pcld/corpus.hpp"
#include "pcld/metrics.hpp"
#include "pcld/model.hpp"
#include "pcld/random.hpp"
#include "pcld/textprep.hpp"
#include "pcld/tokenizer.hpp"
#include "pcld/trainer.hpp"

namespace {

using namespace pcld;

struct Fixture {
  Vocabulary vocab;
  std::vector<Seq2SeqExample> examples;
  ModelParams params;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    auto records = generate_synthetic(64, 0.5, 3);
    std::vector<std::string> texts;
    for (auto& r : records) {
      r.text = clean(r.text).text;
      texts.push_back(r.text);
    }
    out.vocab = build_vocab(texts, 8000);
    out.examples = encode_examples(records, out.vocab, kDefaultMaxSourceTokens);
    ModelConfig mc;
    mc.vocab_size = out.vocab.size();
    out.params = init_params(mc);
    return out;
  }();
  return f;
}

void BM_Forward(benchmark::State& state) {
  const auto& f = fixture();
  const auto& ex = f.examples.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(f.params, ex.src.ids, ex.tgt_in.ids));
  }
}
BENCHMARK(BM_Forward);

void BM_LossAndGradients(benchmark::State& state) {
  const auto& f = fixture();
  const std::span<const Seq2SeqExample> batch(f.examples.data(), static_cast<std::size_t>(state.range(0)));
  ModelParams grads;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_gradients(f.params, batch, &grads));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LossAndGradients)->Arg(1)->Arg(16);

void BM_AdamStep(benchmark::State& state) {
  const auto& f = fixture();
  auto params = f.params;
  ModelParams grads;
  loss_and_gradients(params, std::span(f.examples.data(), 4), &grads);
  auto opt = init_optimizer_state(params);
  for (auto _ : state) {
    adam_step(params, grads, opt, 1e-6);
  }
}
BENCHMARK(BM_AdamStep);

void BM_Clean(benchmark::State& state) {
  const auto records = generate_synthetic(256, 0.5, 9);
  std::size_t bytes = 0;
  for (const auto& r : records) {
    bytes += r.text.size();
  }
  for (auto _ : state) {
    for (const auto& r : records) {
      benchmark::DoNotOptimize(clean(r.text));
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Clean);

void BM_Metrics(benchmark::State& state) {
  Rng rng(5);
  std::vector<int> p(10000), g(10000);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = static_cast<int>(rng.uniform_below(2));
    g[i] = static_cast<int>(rng.uniform_below(2));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_report(confusion(p, g)));
  }
}
BENCHMARK(BM_Metrics);

}  // namespace

BENCHMARK_MAIN();
