#include "pcld/tokenizer.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "pcld/digest.hpp"
#include "pcld/error.hpp"

namespace pcld {

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) {
      ++j;
    }
    if (j > i) {
      words.push_back(text.substr(i, j - i));
    }
    i = j;
  }
  return words;
}

std::vector<std::string> mandatory_tokens() {
  std::vector<std::string> tokens{std::string(kPadToken), std::string(kEosToken), std::string(kUnkToken)};
  for (const auto word : split_words(kTaskPrefix)) {
    tokens.emplace_back(word);
  }
  tokens.emplace_back("0");
  tokens.emplace_back("1");
  return tokens;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  const auto required = mandatory_tokens();
  if (tokens.size() < required.size() || !std::equal(required.begin(), required.end(), tokens.begin())) {
    throw DataError("vocabulary does not start with the reserved tokens");
  }
  Vocabulary vocab;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty() || tokens[i].find_first_of(" \t\r\n") != std::string::npos) {
      throw DataError(fmt::format("vocabulary entry {} is empty or contains whitespace", i));
    }
    if (!vocab.index_.emplace(tokens[i], static_cast<TokenId>(i)).second) {
      throw DataError(fmt::format("duplicate vocabulary entry '{}'", tokens[i]));
    }
  }
  vocab.tokens_ = std::move(tokens);
  return vocab;
}

Vocabulary Vocabulary::parse(std::string_view content) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = content.size();
    }
    auto line = content.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    tokens.emplace_back(line);
    pos = eol + 1;
  }
  return from_tokens(std::move(tokens));
}

TokenId Vocabulary::id_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const { return index_.contains(std::string(token)); }

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw UsageError(fmt::format("token id {} outside vocabulary of size {}", id, tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

TokenId Vocabulary::label_id(int label) const {
  if (label != 0 && label != 1) {
    throw UsageError(fmt::format("label {} is not 0 or 1", label));
  }
  return id_of(label == 0 ? "0" : "1");
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (const auto& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

std::string Vocabulary::digest() const { return sha256_hex(serialize()); }

Vocabulary build_vocab(const std::vector<std::string>& texts, std::size_t max_size) {
  auto tokens = mandatory_tokens();
  if (max_size < tokens.size()) {
    throw UsageError(fmt::format("max vocabulary size {} below the {} mandatory tokens", max_size, tokens.size()));
  }
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const auto& text : texts) {
    for (const auto word : split_words(text)) {
      ++counts[std::string(word)];
    }
  }
  for (const auto& t : tokens) {
    counts.erase(t);
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is already lexicographic, so a stable sort on frequency keeps ties ordered.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (auto& [word, n] : ranked) {
    if (tokens.size() >= max_size) {
      break;
    }
    tokens.push_back(std::move(word));
  }
  return Vocabulary::from_tokens(std::move(tokens));
}

TokenSequence encode_source(std::string_view text, const Vocabulary& vocab, std::size_t max_tokens) {
  TokenSequence seq;
  for (const auto word : split_words(kTaskPrefix)) {
    seq.ids.push_back(vocab.id_of(word));
  }
  const std::size_t reserved = seq.ids.size() + 1;
  if (max_tokens < reserved) {
    throw UsageError(fmt::format("max source length {} cannot hold prefix and EOS", max_tokens));
  }
  for (const auto word : split_words(text)) {
    if (seq.ids.size() + 1 >= max_tokens) {
      break;
    }
    seq.ids.push_back(vocab.id_of(word));
  }
  seq.ids.push_back(Vocabulary::kEos);
  return seq;
}

TokenSequence encode_target(int label, const Vocabulary& vocab) {
  return TokenSequence{{vocab.label_id(label), Vocabulary::kEos}};
}

std::string decode(const TokenSequence& seq, const Vocabulary& vocab) {
  std::string out;
  for (const auto id : seq.ids) {
    const auto& tok = vocab.token(id);
    if (id == Vocabulary::kEos) {
      break;
    }
    if (id == Vocabulary::kPad) {
      continue;
    }
    if (!out.empty()) {
      out += ' ';
    }
    out += tok;
  }
  return out;
}

}  // namespace pcld
