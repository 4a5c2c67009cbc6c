#include <gtest/gtest.h>

#include "pcld/corpus.hpp"
#include "pcld/error.hpp"

namespace pcld {
namespace {

TEST(MapLabel, LowScoresAreNegative) {
  EXPECT_EQ(map_label(0), 0);
  EXPECT_EQ(map_label(1), 0);
}

TEST(MapLabel, HighScoresArePositive) {
  EXPECT_EQ(map_label(2), 1);
  EXPECT_EQ(map_label(3), 1);
  EXPECT_EQ(map_label(4), 1);
}

TEST(MapLabel, OutOfRangeThrows) {
  EXPECT_THROW(map_label(-1), DataError);
  EXPECT_THROW(map_label(5), DataError);
}

TEST(ParseCorpus, SingleLabeledLine) {
  const auto recs = parse_corpus("p1\ta9\tpoor-families\tgb\tsome text\t3");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].par_id, "p1");
  EXPECT_EQ(recs[0].art_id, "a9");
  EXPECT_EQ(recs[0].keyword, "poor-families");
  EXPECT_EQ(recs[0].country, "gb");
  EXPECT_EQ(recs[0].text, "some text");
  EXPECT_EQ(recs[0].orig_label, 3);
  EXPECT_EQ(recs[0].binary_label, 1);
}

TEST(ParseCorpus, EmptyInputGivesNoRecords) {
  EXPECT_TRUE(parse_corpus("").empty());
  EXPECT_TRUE(parse_corpus("\n\n").empty());
}

TEST(ParseCorpus, WrongFieldCountNamesLine) {
  try {
    parse_corpus("p1\ta9\tkw\tgb");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();
  }
}

TEST(ParseCorpus, ErrorLineNumberCountsSkippedAndBlankLines) {
  try {
    parse_corpus("header\np1\ta\tk\tc\tt\t0\n\np2\ta\tk\tc\tt\t9\n", {.columns = {}, .has_labels = true, .skip_lines = 1});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(ParseCorpus, RejectsBadLabels) {
  EXPECT_THROW(parse_corpus("p1\ta\tk\tc\tt\t7"), DataError);
  EXPECT_THROW(parse_corpus("p1\ta\tk\tc\tt\tx"), DataError);
  EXPECT_THROW(parse_corpus("p1\ta\tk\tc\tt\t"), DataError);
}

TEST(ParseCorpus, RejectsDuplicateAndEmptyIds) {
  EXPECT_THROW(parse_corpus("p1\ta\tk\tc\tt\t0\np1\ta\tk\tc\tu\t1\n"), DataError);
  EXPECT_THROW(parse_corpus("\ta\tk\tc\tt\t0"), DataError);
}

TEST(ParseCorpus, AcceptsCrlfAndEmptyArtId) {
  const auto recs = parse_corpus("p1\t\tk\tc\tfirst\t0\r\np2\t\tk\tc\tsecond\t4\r\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].art_id, "");
  EXPECT_EQ(recs[1].text, "second");
  EXPECT_EQ(recs[1].binary_label, 1);
}

TEST(ParseCorpus, UnlabeledRows) {
  ParseOptions opts;
  opts.has_labels = false;
  const auto recs = parse_corpus("t1\ta\tk\tc\ttext here\n", opts);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_FALSE(recs[0].orig_label.has_value());
  EXPECT_FALSE(recs[0].binary_label.has_value());
  EXPECT_THROW(parse_corpus("t1\ta\tk\tc\ttext\t1\n", opts), DataError);
}

TEST(ParseCorpus, CustomColumnOrder) {
  ParseOptions opts;
  opts.columns = ColumnMap{.par_id = 1, .art_id = 0, .keyword = 2, .country = 3, .text = 5, .label = 4};
  const auto recs = parse_corpus("a1\tp7\tkw\tus\t2\tthe text\n", opts);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].par_id, "p7");
  EXPECT_EQ(recs[0].text, "the text");
  EXPECT_EQ(recs[0].orig_label, 2);
}

TEST(CorpusStats, Empty) { EXPECT_EQ(corpus_stats({}), (CountSummary{0, 0, 0})); }

TEST(CorpusStats, CountsByHand) {
  const auto recs = parse_corpus("a\t\tk\tc\tt\t0\nb\t\tk\tc\tt\t2\nc\t\tk\tc\tt\t4\n");
  EXPECT_EQ(corpus_stats(recs), (CountSummary{3, 1, 2}));
}

TEST(CorpusStats, UnlabeledThrows) {
  ParseOptions opts;
  opts.has_labels = false;
  EXPECT_THROW(corpus_stats(parse_corpus("a\t\tk\tc\tt\n", opts)), DataError);
}

TEST(CorpusStats, AdditiveOverDisjointUnion) {
  const auto all = generate_synthetic(50, 0.3, 11);
  for (std::size_t cut : {0u, 1u, 17u, 49u, 50u}) {
    const std::vector<ParagraphRecord> a(all.begin(), all.begin() + cut);
    const std::vector<ParagraphRecord> b(all.begin() + cut, all.end());
    auto sum = corpus_stats(a);
    sum += corpus_stats(b);
    EXPECT_EQ(sum, corpus_stats(all)) << "cut " << cut;
  }
}

TEST(Synthetic, AllNegativeAtZeroRate) {
  const auto recs = generate_synthetic(10, 0.0, 1);
  ASSERT_EQ(recs.size(), 10u);
  for (const auto& r : recs) {
    EXPECT_EQ(r.binary_label, 0);
  }
}

TEST(Synthetic, DeterministicForSeed) {
  EXPECT_EQ(generate_synthetic(10, 0.5, 7), generate_synthetic(10, 0.5, 7));
  EXPECT_NE(generate_synthetic(10, 0.5, 7), generate_synthetic(10, 0.5, 8));
}

TEST(Synthetic, RoundedPositiveCount) {
  EXPECT_EQ(corpus_stats(generate_synthetic(32, 0.25, 3)), (CountSummary{32, 24, 8}));
  EXPECT_EQ(corpus_stats(generate_synthetic(7, 1.0, 3)), (CountSummary{7, 0, 7}));
}

TEST(Synthetic, LabelsConsistentWithOriginalScore) {
  for (const auto& r : generate_synthetic(200, 0.4, 5)) {
    ASSERT_TRUE(r.orig_label && r.binary_label);
    EXPECT_EQ(*r.binary_label, map_label(*r.orig_label));
  }
}

TEST(Synthetic, RejectsBadRate) {
  EXPECT_THROW(generate_synthetic(10, 1.5, 1), UsageError);
  EXPECT_THROW(generate_synthetic(10, -0.1, 1), UsageError);
}

TEST(Serialize, RoundTripsSyntheticCorpora) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto recs = generate_synthetic(5 + seed * 3, 0.1 * static_cast<double>(seed % 10), seed);
    EXPECT_EQ(parse_corpus(serialize_corpus(recs)), recs) << "seed " << seed;
  }
}

TEST(Serialize, UnlabeledRoundTrip) {
  auto recs = generate_synthetic(6, 0.5, 2);
  for (auto& r : recs) {
    r.orig_label.reset();
    r.binary_label.reset();
  }
  ParseOptions opts;
  opts.has_labels = false;
  EXPECT_EQ(parse_corpus(serialize_corpus(recs), opts), recs);
}

TEST(Serialize, RejectsTabsInFields) {
  auto recs = generate_synthetic(2, 0.5, 2);
  recs[1].text = "has\ttab";
  EXPECT_THROW(serialize_corpus(recs), DataError);
}

}  // namespace
}  // namespace pcld
