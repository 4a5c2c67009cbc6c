#include "pcld/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "pcld/error.hpp"
#include "pcld/random.hpp"

namespace pcld {

std::size_t ColumnMap::field_count(bool has_labels) const {
  std::size_t max_index = std::max({par_id, art_id, keyword, country, text});
  if (has_labels) {
    max_index = std::max(max_index, label);
  }
  return max_index + 1;
}

CountSummary& CountSummary::operator+=(const CountSummary& other) {
  total += other.total;
  neg += other.neg;
  pos += other.pos;
  return *this;
}

int map_label(int orig_label) {
  if (orig_label < 0 || orig_label > 4) {
    throw DataError(fmt::format("original label {} outside 0-4", orig_label));
  }
  return orig_label >= 2 ? 1 : 0;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

int parse_label(std::string_view field, std::size_t line_no) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DataError(fmt::format("line {}: label '{}' is not an integer", line_no, field));
  }
  if (value < 0 || value > 4) {
    throw DataError(fmt::format("line {}: original label {} outside 0-4", line_no, value));
  }
  return value;
}

}  // namespace

std::vector<ParagraphRecord> parse_corpus(std::string_view tsv_content, const ParseOptions& options) {
  const std::size_t expected = options.columns.field_count(options.has_labels);
  std::vector<ParagraphRecord> records;
  std::unordered_set<std::string> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < tsv_content.size()) {
    auto eol = tsv_content.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = tsv_content.size();
    }
    std::string_view line = tsv_content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line_no <= options.skip_lines || line.empty()) {
      continue;
    }

    const auto fields = split_tabs(line);
    if (fields.size() != expected) {
      throw DataError(fmt::format("line {}: expected {} tab-separated fields, found {}", line_no,
                                  expected, fields.size()));
    }
    const auto& cols = options.columns;
    ParagraphRecord rec;
    rec.par_id = std::string(fields[cols.par_id]);
    rec.art_id = std::string(fields[cols.art_id]);
    rec.keyword = std::string(fields[cols.keyword]);
    rec.country = std::string(fields[cols.country]);
    rec.text = std::string(fields[cols.text]);
    if (rec.par_id.empty()) {
      throw DataError(fmt::format("line {}: empty par_id", line_no));
    }
    if (!seen.insert(rec.par_id).second) {
      throw DataError(fmt::format("line {}: duplicate par_id '{}'", line_no, rec.par_id));
    }
    if (options.has_labels) {
      rec.orig_label = parse_label(fields[cols.label], line_no);
      rec.binary_label = map_label(*rec.orig_label);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string serialize_corpus(const std::vector<ParagraphRecord>& records) {
  const bool labeled = !records.empty() && std::all_of(records.begin(), records.end(), [](const auto& r) {
    return r.orig_label.has_value();
  });
  std::string out;
  for (const auto& r : records) {
    for (const std::string* field : {&r.par_id, &r.art_id, &r.keyword, &r.country, &r.text}) {
      if (field->find_first_of("\t\r\n") != std::string::npos) {
        throw DataError(fmt::format("record '{}': field contains a tab or line break", r.par_id));
      }
    }
    out += fmt::format("{}\t{}\t{}\t{}\t{}", r.par_id, r.art_id, r.keyword, r.country, r.text);
    if (labeled) {
      out += fmt::format("\t{}", *r.orig_label);
    }
    out += '\n';
  }
  return out;
}

CountSummary corpus_stats(const std::vector<ParagraphRecord>& records) {
  CountSummary summary;
  for (const auto& r : records) {
    if (!r.binary_label) {
      throw DataError(fmt::format("record '{}' has no label", r.par_id));
    }
    ++summary.total;
    if (*r.binary_label == 1) {
      ++summary.pos;
    } else {
      ++summary.neg;
    }
  }
  return summary;
}

namespace {

constexpr std::array kKeywords = {"disabled", "homeless",   "hopeless",      "immigrant", "in-need",
                                  "migrant",  "poor-families", "refugee",    "vulnerable", "women"};
constexpr std::array kCountries = {"au", "ca", "gb", "gh", "ie", "in", "jm", "ke", "lk", "my",
                                   "ng", "nz", "ph", "pk", "sg", "tz", "us", "za"};
constexpr std::array kGroups = {"refugees", "migrants", "homeless people", "poor families",
                                "disabled children", "women", "immigrants", "vulnerable communities"};

// Positive and negative word pools share no tokens besides the group names.
constexpr std::array kPosOpeners = {"Bless these", "Pity the", "Our hearts break for the",
                                    "Let us save the", "Imagine the suffering of"};
constexpr std::array kPosBodies = {"they deserve our compassion and kindness",
                                   "helpless souls waiting for a saviour",
                                   "so grateful for every little blessing",
                                   "their innocent smiles melt our hearts",
                                   "we must rescue them from despair"};
constexpr std::array kNegOpeners = {"Officials said", "The council reported that", "A survey found",
                                    "Analysts noted", "The ministry confirmed that"};
constexpr std::array kNegBodies = {"housing budgets rose during the quarter",
                                   "employment figures were published on tuesday",
                                   "the agency processed applications on schedule",
                                   "new regulations take effect next month",
                                   "census data shows shifting demographics"};
constexpr std::array kDecorations = {"!!", ".", " #news", " (via https://news.example.org/item)",
                                     "...", " :)"};

template <typename Array>
const char* pick(Rng& rng, const Array& pool) {
  return pool[rng.uniform_below(pool.size())];
}

}  // namespace

std::vector<ParagraphRecord> generate_synthetic(std::size_t n, double pos_rate, std::uint64_t seed) {
  if (!(pos_rate >= 0.0 && pos_rate <= 1.0)) {
    throw UsageError(fmt::format("pos_rate {} outside [0, 1]", pos_rate));
  }
  const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * pos_rate));
  Rng rng(seed);

  std::vector<int> labels(n, 0);
  std::fill_n(labels.begin(), std::min(n_pos, n), 1);
  rng.shuffle(std::span<int>(labels));

  std::vector<ParagraphRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ParagraphRecord rec;
    rec.par_id = fmt::format("syn{}", i + 1);
    rec.art_id = fmt::format("@@{}", 1000 + rng.uniform_below(9000));
    rec.keyword = pick(rng, kKeywords);
    rec.country = pick(rng, kCountries);
    const char* group = pick(rng, kGroups);
    const auto count = 2 + rng.uniform_below(998);
    if (labels[i] == 1) {
      rec.text = fmt::format("{} {} , {} {}{}", pick(rng, kPosOpeners), group, pick(rng, kPosBodies),
                             count, pick(rng, kDecorations));
      rec.orig_label = 2 + static_cast<int>(rng.uniform_below(3));
    } else {
      rec.text = fmt::format("{} {} {} , {}{}", pick(rng, kNegOpeners), count, group,
                             pick(rng, kNegBodies), pick(rng, kDecorations));
      rec.orig_label = static_cast<int>(rng.uniform_below(2));
    }
    rec.binary_label = map_label(*rec.orig_label);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace pcld
