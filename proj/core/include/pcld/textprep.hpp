#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace pcld {

struct CleaningReport {
  std::size_t emails_removed = 0;
  std::size_t urls_removed = 0;
  std::size_t ips_removed = 0;
  std::size_t chars_dropped = 0;  ///< Digits and disallowed characters (a UTF-8 sequence counts once).

  CleaningReport& operator+=(const CleaningReport& other);
  bool operator==(const CleaningReport&) const = default;
};

struct CleanResult {
  std::string text;
  CleaningReport report;
};

/// Normalises a raw paragraph. Stages, in order:
///   1. drop email tokens (whitespace-delimited, exactly one '@', non-empty
///      sides, a '.' after the '@');
///   2. drop URL tokens (starting with http://, https:// or www., any case);
///   3. drop IPv4-shaped runs (four dot-separated groups of 1-3 digits);
///   4. ASCII lowercase;
///   5. delete every digit run;
///   6. delete everything except a-z, whitespace, and apostrophes that touch
///      a letter;
///   7. collapse whitespace to single spaces and trim.
/// The result uses only [a-z' ] and clean(clean(x)) == clean(x).
CleanResult clean(std::string_view raw);

}  // namespace pcld
