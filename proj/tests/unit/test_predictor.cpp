#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "pcld/error.hpp"
#include "pcld/predictor.hpp"
#include "pcld/trainer.hpp"
#include "support.hpp"

namespace pcld {
namespace {

TEST(CorrectOutOfClass, ExactMatch) {
  EXPECT_EQ(correct_out_of_class("1").label, 1);
  EXPECT_TRUE(correct_out_of_class("1").in_class);
  EXPECT_EQ(correct_out_of_class("0").label, 0);
}

TEST(CorrectOutOfClass, TrimsWhitespace) {
  const auto d = correct_out_of_class(" 0 ");
  EXPECT_EQ(d.label, 0);
  EXPECT_TRUE(d.in_class);
  EXPECT_TRUE(correct_out_of_class("\t1\n").in_class);
}

TEST(CorrectOutOfClass, FallbackForAnythingElse) {
  for (const char* raw : {"the poor", "", "zero", "01", "1 1", "2", "<unk>"}) {
    const auto d = correct_out_of_class(raw);
    EXPECT_EQ(d.label, 0) << raw;
    EXPECT_FALSE(d.in_class) << raw;
  }
  EXPECT_EQ(correct_out_of_class("the poor", 1).label, 1);
  EXPECT_THROW(correct_out_of_class("x", 2), UsageError);
}

TEST(OutOfClassRate, Arithmetic) {
  EXPECT_EQ(out_of_class_rate({}), 0.0);
  std::vector<Prediction> preds(10);
  for (auto& p : preds) p.in_class = true;
  EXPECT_EQ(out_of_class_rate(preds), 0.0);
  preds[3].in_class = false;
  preds[8].in_class = false;
  EXPECT_DOUBLE_EQ(out_of_class_rate(preds), 0.2);
}

TEST(Submission, FormatAndParse) {
  std::vector<Prediction> preds(3);
  preds[1].label = 1;
  EXPECT_EQ(format_submission(preds), "0\n1\n0\n");
  EXPECT_EQ(parse_submission("0\n1\n0\n"), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(parse_submission("1\r\n0"), (std::vector<int>{1, 0}));
  EXPECT_THROW(parse_submission("0\n2\n"), DataError);
  EXPECT_TRUE(parse_submission("").empty());
}

TEST(Audit, JsonLines) {
  const std::vector<Prediction> preds{{"p1", "1", 1, true}, {"p2", "the poor", 0, false}};
  const auto audit = format_audit(preds);
  const auto nl = audit.find('\n');
  const auto second = nlohmann::json::parse(audit.substr(nl + 1, audit.size() - nl - 2));
  EXPECT_EQ(second["par_id"], "p2");
  EXPECT_EQ(second["raw_decoded"], "the poor");
  EXPECT_EQ(second["in_class"], false);
}

TEST(GreedyDecode, ZeroLengthThrows) {
  const auto v = build_vocab({"a b c"}, 100);
  const auto p = init_params(testing::tiny_config(v.size(), 1));
  EXPECT_THROW(greedy_decode(p, v, encode_source("a", v), 0), UsageError);
}

TEST(GreedyDecode, ImmediateEosGivesEmptyString) {
  const auto v = build_vocab({"a b c"}, 100);
  auto c = testing::tiny_config(v.size(), 1);
  c.tie_embeddings = false;
  auto p = init_params(c);
  const auto src = encode_source("a b", v);
  const std::vector<TokenId> start{Vocabulary::kPad};
  const Matrix h = decode_hidden(p, encode(p, src.ids), start);
  p.output.setZero();
  p.output.row(Vocabulary::kEos) = h.row(0);
  EXPECT_EQ(greedy_decode(p, v, src, 1), "");
  EXPECT_EQ(greedy_decode(p, v, src, 4), "");
}

TEST(GreedyDecode, TiesPickLowestId) {
  const auto v = build_vocab({"a b c"}, 100);
  auto c = testing::tiny_config(v.size(), 1);
  c.tie_embeddings = false;
  auto p = init_params(c);
  p.output.setZero();
  // Every logit is 0, so PAD (id 0) wins each step and is skipped by decode.
  EXPECT_EQ(greedy_decode(p, v, encode_source("a", v), 3), "");
  const auto src = encode_source("c", v);
  const Matrix h = decode_hidden(p, encode(p, src.ids), std::vector<TokenId>{Vocabulary::kPad});
  p.output.row(v.id_of("b")) = h.row(0);
  p.output.row(v.id_of("c")) = h.row(0);
  EXPECT_EQ(greedy_decode(p, v, src, 1), "b");
}

TEST(GreedyDecode, OverfitModelEmitsLabels) {
  const auto recs = testing::cleaned_synthetic(4, 0.5, 3);
  const auto v = build_vocab(testing::texts_of(recs), 100);
  const auto ex = encode_examples(recs, v, 64);
  TrainConfig tc;
  tc.epochs = 80;
  tc.batch_size = 4;
  tc.peak_lr = 3e-3;
  const auto out = train(testing::tiny_config(0, 2), tc, ex, ex, v);
  for (const auto& r : recs) {
    const auto src = encode_source(r.text, v);
    const auto decoded = greedy_decode(out.best, v, src);
    EXPECT_EQ(decoded, std::to_string(*r.binary_label)) << r.text;
    EXPECT_EQ(greedy_decode(out.best, v, src), decoded);
  }
  const auto batch = predict_records(out.best, v, recs);
  ASSERT_EQ(batch.predictions.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(batch.predictions[i].par_id, recs[i].par_id);
    EXPECT_EQ(batch.predictions[i].label, *recs[i].binary_label);
  }
  EXPECT_EQ(batch.out_of_class_rate, 0.0);
}

TEST(PredictRecords, EmptyAndVocabMismatch) {
  const auto v = build_vocab({"a b c"}, 100);
  Checkpoint ck;
  ck.params = init_params(testing::tiny_config(v.size(), 1));
  ck.vocab_hash = v.digest();
  const auto empty = predict_records(ck, v, {});
  EXPECT_TRUE(empty.predictions.empty());
  EXPECT_EQ(empty.out_of_class_rate, 0.0);
  ck.vocab_hash = "different";
  EXPECT_THROW(predict_records(ck, v, {}), DataError);
}

TEST(PredictRecords, LabelsAlwaysLegal) {
  const auto recs = testing::cleaned_synthetic(12, 0.5, 8);
  const auto v = build_vocab(testing::texts_of(recs), 100);
  const auto p = testing::randomized_params(testing::tiny_config(v.size(), 4), 4);
  PredictOptions opts;
  opts.fallback_class = 1;
  const auto batch = predict_records(p, v, recs, opts);
  for (const auto& pr : batch.predictions) {
    EXPECT_TRUE(pr.label == 0 || pr.label == 1);
    EXPECT_EQ(pr.in_class, correct_out_of_class(pr.raw_decoded).in_class);
    if (!pr.in_class) {
      EXPECT_EQ(pr.label, 1);
    }
  }
}

}  // namespace
}  // namespace pcld
