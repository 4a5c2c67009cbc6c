#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pcld {

using TokenId = std::int32_t;

struct TokenSequence {
  std::vector<TokenId> ids;

  std::size_t length() const { return ids.size(); }
  bool operator==(const TokenSequence&) const = default;
};

inline constexpr std::string_view kTaskPrefix = "classification: ";
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kEosToken = "</s>";
inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::size_t kDefaultMaxSourceTokens = 64;

/// Word-level vocabulary. Ids are dense; PAD, EOS, UNK take 0, 1, 2, followed
/// by the prefix token(s) and the label strings "0" and "1", then corpus words
/// by descending frequency (ties lexicographic).
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kEos = 1;
  static constexpr TokenId kUnk = 2;

  /// Builds from an ordered token list (position = id); validates the reserved layout.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  /// Parses the one-token-per-line file format.
  static Vocabulary parse(std::string_view content);

  std::size_t size() const { return tokens_.size(); }
  TokenId id_of(std::string_view token) const;  ///< kUnk when absent.
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;   ///< Throws UsageError when out of range.
  const std::vector<std::string>& tokens() const { return tokens_; }

  TokenId label_id(int label) const;  ///< Id of "0" or "1".

  std::string serialize() const;  ///< One token per line, LF endings.
  std::string digest() const;     ///< SHA-256 of serialize().

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

/// Tokens every vocabulary carries, in id order.
std::vector<std::string> mandatory_tokens();

/// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_words(std::string_view text);

/// Throws UsageError if max_size cannot hold the mandatory tokens.
Vocabulary build_vocab(const std::vector<std::string>& texts, std::size_t max_size);

/// Prefix tokens + text tokens + EOS. Text tokens beyond the budget are
/// dropped from the tail so the whole sequence fits in max_tokens.
TokenSequence encode_source(std::string_view text, const Vocabulary& vocab,
                            std::size_t max_tokens = kDefaultMaxSourceTokens);

/// The label as a single string token followed by EOS. Throws UsageError unless label is 0 or 1.
TokenSequence encode_target(int label, const Vocabulary& vocab);

/// Joins tokens with single spaces, stopping at the first EOS and skipping PAD.
/// Throws UsageError for ids outside the vocabulary.
std::string decode(const TokenSequence& seq, const Vocabulary& vocab);

}  // namespace pcld
