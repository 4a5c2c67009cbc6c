#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcld {

/// One paragraph of a PCL corpus.
struct ParagraphRecord {
  std::string par_id;
  std::string art_id;
  std::string keyword;
  std::string country;
  std::string text;
  std::optional<int> orig_label;    ///< 0-4 annotator score; absent for unlabeled rows.
  std::optional<int> binary_label;  ///< map_label(orig_label); absent for unlabeled rows.

  bool operator==(const ParagraphRecord&) const = default;
};

/// Which zero-based TSV column holds each field.
///
/// The default is par_id, art_id, keyword, country, text, label. A row must
/// have exactly field_count() columns; unlabeled files omit the label column.
struct ColumnMap {
  std::size_t par_id = 0;
  std::size_t art_id = 1;
  std::size_t keyword = 2;
  std::size_t country = 3;
  std::size_t text = 4;
  std::size_t label = 5;

  std::size_t field_count(bool has_labels) const;
};

struct ParseOptions {
  ColumnMap columns{};
  bool has_labels = true;
  std::size_t skip_lines = 0;  ///< Leading header/disclaimer lines to ignore.
};

struct CountSummary {
  std::size_t total = 0;
  std::size_t neg = 0;
  std::size_t pos = 0;

  CountSummary& operator+=(const CountSummary& other);
  bool operator==(const CountSummary&) const = default;
};

/// Totals commonly quoted for the labeled training release; ingest reports
/// observed counts next to these instead of reconciling them.
inline constexpr std::size_t kReportedLabeledTotal = 10469;
inline constexpr std::size_t kReportedNegatives = 9476;
inline constexpr std::size_t kReportedPositives = 993;
inline constexpr std::size_t kDatasetParagraphs = 10637;

/// Collapses the 0-4 annotator score to the binary task: {0,1} -> 0, {2,3,4} -> 1.
int map_label(int orig_label);

/// Parses TSV content. Empty lines are skipped; CRLF endings are accepted.
/// Throws DataError naming the 1-based line on wrong field count, bad label,
/// empty or duplicate par_id.
std::vector<ParagraphRecord> parse_corpus(std::string_view tsv_content, const ParseOptions& options = {});

/// Writes records in the default column order with LF endings. Labels are
/// written only when every record carries one. Throws DataError if a field
/// contains a tab or newline.
std::string serialize_corpus(const std::vector<ParagraphRecord>& records);

/// Throws DataError if any record lacks a binary label.
CountSummary corpus_stats(const std::vector<ParagraphRecord>& records);

/// Deterministic corpus with round(n * pos_rate) positives whose texts come
/// from a vocabulary disjoint from the negatives'. Raw texts carry casing,
/// digits, punctuation and the occasional URL so cleaning has work to do.
std::vector<ParagraphRecord> generate_synthetic(std::size_t n, double pos_rate, std::uint64_t seed);

}  // namespace pcld
