#include "pcld/textprep.hpp"

#include <algorithm>
#include <vector>

namespace pcld {

CleaningReport& CleaningReport::operator+=(const CleaningReport& other) {
  emails_removed += other.emails_removed;
  urls_removed += other.urls_removed;
  ips_removed += other.ips_removed;
  chars_dropped += other.chars_dropped;
  return *this;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) {
    return false;
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(s[i]) != prefix[i]) {
      return false;
    }
  }
  return true;
}

bool is_email(std::string_view token) {
  if (std::count(token.begin(), token.end(), '@') != 1) {
    return false;
  }
  const auto at = token.find('@');
  const auto domain = token.substr(at + 1);
  return at > 0 && !domain.empty() && domain.find('.') != std::string_view::npos;
}

bool is_url(std::string_view token) {
  return istarts_with(token, "http://") || istarts_with(token, "https://") || istarts_with(token, "www.");
}

// Removes whole whitespace-delimited tokens matching `pred`, leaving the
// surrounding whitespace in place.
template <typename Pred>
std::string drop_tokens(std::string_view text, Pred pred, std::size_t& removed) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) {
      ++j;
    }
    const auto token = text.substr(i, j - i);
    if (pred(token)) {
      ++removed;
    } else {
      out.append(token);
    }
    i = j;
  }
  return out;
}

bool is_ipv4(std::string_view run) {
  int groups = 0;
  std::size_t i = 0;
  while (true) {
    std::size_t digits = 0;
    while (i < run.size() && is_digit(run[i])) {
      ++digits;
      ++i;
    }
    if (digits < 1 || digits > 3) {
      return false;
    }
    ++groups;
    if (i == run.size()) {
      return groups == 4;
    }
    if (run[i] != '.' || groups == 4) {
      return false;
    }
    ++i;
  }
}

// Scans maximal runs of [0-9.]; a run whose dot-trimmed core is an IPv4
// address is deleted, with any trailing dots kept for later stages.
std::string drop_ips(std::string_view text, std::size_t& removed) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (is_digit(text[j]) || text[j] == '.')) {
      ++j;
    }
    std::size_t core_end = j;
    while (core_end > i && text[core_end - 1] == '.') {
      --core_end;
    }
    const auto core = text.substr(i, core_end - i);
    if (is_ipv4(core)) {
      ++removed;
      out.append(text.substr(core_end, j - core_end));
    } else {
      out.append(text.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

// Length of the UTF-8 sequence introduced by `lead`; stray continuation or
// invalid bytes count as one character.
std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0 && lead <= 0xF7) return 4;
  if (lead >= 0xE0) return lead <= 0xEF ? 3 : 1;
  if (lead >= 0xC0) return 2;
  return 1;
}

}  // namespace

CleanResult clean(std::string_view raw) {
  CleanResult result;
  auto& report = result.report;

  std::string text = drop_tokens(raw, is_email, report.emails_removed);
  text = drop_tokens(text, is_url, report.urls_removed);
  text = drop_ips(text, report.ips_removed);
  std::transform(text.begin(), text.end(), text.begin(), ascii_lower);

  // Digit runs and disallowed characters. Apostrophes are decided after this
  // pass, once their final neighbours are known.
  std::string filtered;
  filtered.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (is_lower(c) || c == '\'') {
      filtered.push_back(c);
      ++i;
    } else if (is_space(c)) {
      filtered.push_back(' ');
      ++i;
    } else {
      const auto width = std::min(utf8_length(static_cast<unsigned char>(c)), text.size() - i);
      ++report.chars_dropped;
      i += width;
    }
  }

  std::string kept;
  kept.reserve(filtered.size());
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    const char c = filtered[i];
    if (c == '\'') {
      const bool left = i > 0 && is_lower(filtered[i - 1]);
      const bool right = i + 1 < filtered.size() && is_lower(filtered[i + 1]);
      if (!left && !right) {
        ++report.chars_dropped;
        continue;
      }
    }
    kept.push_back(c);
  }

  std::string& out = result.text;
  out.reserve(kept.size());
  for (const char c : kept) {
    if (c == ' ') {
      if (!out.empty() && out.back() != ' ') {
        out.push_back(' ');
      }
    } else {
      out.push_back(c);
    }
  }
  if (!out.empty() && out.back() == ' ') {
    out.pop_back();
  }
  return result;
}

}  // namespace pcld
