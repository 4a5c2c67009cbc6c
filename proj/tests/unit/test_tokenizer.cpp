#include <gtest/gtest.h>

#include "pcld/error.hpp"
#include "pcld/random.hpp"
#include "pcld/tokenizer.hpp"

namespace pcld {
namespace {

TokenSequence seq(std::initializer_list<TokenId> ids) { return TokenSequence{std::vector<TokenId>(ids)}; }

TEST(Vocabulary, SmallCorpus) {
  const auto v = build_vocab({"a b", "b c"}, 100);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"<pad>", "</s>", "<unk>", "classification:", "0", "1", "b", "a", "c"}));
  EXPECT_EQ(v.id_of("<pad>"), Vocabulary::kPad);
  EXPECT_EQ(v.id_of("</s>"), Vocabulary::kEos);
  EXPECT_EQ(v.id_of("<unk>"), Vocabulary::kUnk);
}

TEST(Vocabulary, EmptyTextsGiveMandatoryOnly) {
  const auto v = build_vocab({}, 100);
  EXPECT_EQ(v.tokens(), mandatory_tokens());
  EXPECT_EQ(v.size(), 6u);
}

TEST(Vocabulary, TruncationBoundary) {
  const auto v = build_vocab({"x y z", "x"}, mandatory_tokens().size());
  EXPECT_EQ(v.tokens(), mandatory_tokens());
  const auto s = encode_source("x y", v);
  EXPECT_EQ(s, seq({3, Vocabulary::kUnk, Vocabulary::kUnk, Vocabulary::kEos}));
}

TEST(Vocabulary, FrequencyThenLexicographic) {
  const auto v = build_vocab({"d c b a", "c d", "c"}, 9);
  // c:3, d:2, then a and b tie at 1 and only a fits.
  EXPECT_EQ(v.token(6), "c");
  EXPECT_EQ(v.token(7), "d");
  EXPECT_EQ(v.token(8), "a");
  EXPECT_EQ(v.size(), 9u);
}

TEST(Vocabulary, MandatoryWordsInCorpusAreNotDuplicated) {
  const auto v = build_vocab({"classification: 0 1 1 word"}, 100);
  EXPECT_EQ(v.size(), 7u);
  EXPECT_EQ(v.token(6), "word");
}

TEST(Vocabulary, TooSmallThrows) { EXPECT_THROW(build_vocab({"a"}, 5), UsageError); }

TEST(Vocabulary, DenseInverseMaps) {
  const auto v = build_vocab({"the poor and the needy", "help the poor"}, 100);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v.id_of(v.token(static_cast<TokenId>(i))), static_cast<TokenId>(i));
  }
  EXPECT_THROW(v.token(static_cast<TokenId>(v.size())), UsageError);
  EXPECT_THROW(v.token(-1), UsageError);
}

TEST(Vocabulary, SerializeRoundTrip) {
  const auto v = build_vocab({"alpha beta", "beta gamma's"}, 100);
  const auto back = Vocabulary::parse(v.serialize());
  EXPECT_EQ(back, v);
  EXPECT_EQ(back.digest(), v.digest());
  EXPECT_EQ(v.digest().size(), 64u);
}

TEST(Vocabulary, ParseRejectsBadFiles) {
  EXPECT_THROW(Vocabulary::parse("a\nb\n"), DataError);
  EXPECT_THROW(Vocabulary::parse("<pad>\n</s>\n<unk>\nclassification:\n0\n1\nx\nx\n"), DataError);
}

TEST(Vocabulary, Deterministic) {
  const std::vector<std::string> texts{"q w e", "e w", "r"};
  EXPECT_EQ(build_vocab(texts, 50), build_vocab(texts, 50));
}

TEST(EncodeSource, PrefixTextEos) {
  const auto v = build_vocab({"hello"}, 100);
  EXPECT_EQ(encode_source("hello", v), seq({v.id_of("classification:"), v.id_of("hello"), Vocabulary::kEos}));
}

TEST(EncodeSource, EmptyText) {
  const auto v = build_vocab({}, 100);
  EXPECT_EQ(encode_source("", v), seq({v.id_of("classification:"), Vocabulary::kEos}));
}

TEST(EncodeSource, UnknownWord) {
  const auto v = build_vocab({"hello"}, 100);
  EXPECT_EQ(encode_source("zzz-unseen", v), seq({v.id_of("classification:"), Vocabulary::kUnk, Vocabulary::kEos}));
}

TEST(EncodeSource, TailTruncation) {
  const auto v = build_vocab({"a b c d e"}, 100);
  const auto s = encode_source("a b c d e", v, 4);
  EXPECT_EQ(s, seq({v.id_of("classification:"), v.id_of("a"), v.id_of("b"), Vocabulary::kEos}));
  EXPECT_EQ(encode_source("a b c d e", v).length(), 7u);
  EXPECT_THROW(encode_source("a", v, 1), UsageError);
}

TEST(EncodeTarget, LabelsAsTokens) {
  const auto v = build_vocab({"x"}, 100);
  EXPECT_EQ(encode_target(0, v), seq({v.id_of("0"), Vocabulary::kEos}));
  EXPECT_EQ(encode_target(1, v), seq({v.id_of("1"), Vocabulary::kEos}));
  EXPECT_THROW(encode_target(2, v), UsageError);
}

TEST(Decode, Basics) {
  const auto v = build_vocab({"a b c"}, 100);
  EXPECT_EQ(decode(seq({v.id_of("1"), Vocabulary::kEos}), v), "1");
  EXPECT_EQ(decode(seq({v.id_of("a"), v.id_of("b"), Vocabulary::kEos, v.id_of("c")}), v), "a b");
  EXPECT_EQ(decode(seq({Vocabulary::kPad, v.id_of("c")}), v), "c");
  EXPECT_THROW(decode(seq({static_cast<TokenId>(v.size())}), v), UsageError);
}

TEST(Decode, RoundTripOnRandomInVocabularyText) {
  const std::vector<std::string> words{"poor", "family", "help", "aid", "they're", "a", "z"};
  std::vector<std::string> texts;
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    std::string t;
    const auto n = rng.uniform_below(10);
    for (std::uint64_t k = 0; k < n; ++k) {
      t += (k ? " " : "") + words[rng.uniform_below(words.size())];
    }
    texts.push_back(t);
  }
  const auto v = build_vocab(texts, 100);
  for (const auto& t : texts) {
    const auto text = decode(encode_source(t, v), v);
    ASSERT_TRUE(text.starts_with("classification:")) << text;
    const std::string body = text.size() > 15 ? text.substr(16) : "";
    EXPECT_EQ(body, t);
  }
}

}  // namespace
}  // namespace pcld
