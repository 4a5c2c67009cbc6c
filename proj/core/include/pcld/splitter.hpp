#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pcld/corpus.hpp"

namespace pcld {

/// Dev fractions of the split-ratio ablation grid.
inline constexpr std::array<double, 4> kAblationDevFractions = {0.05, 0.10, 0.15, 0.20};

struct SplitSpec {
  double dev_fraction = 0.10;
  std::uint64_t seed = 0;
  std::vector<std::string> holdout_ids;
  bool stratify = false;  ///< Off by default; per-class floor quotas when on.
};

struct Split {
  std::vector<ParagraphRecord> train;
  std::vector<ParagraphRecord> dev;
};

/// Seeded Fisher-Yates shuffle (see Rng), then the first floor(f * N) shuffled
/// records form dev and the rest, in shuffled order, form train. Holdout ids
/// are then moved into dev with inject_holdout.
///
/// With stratify set, dev takes the first floor(f * n_c) shuffled records of
/// each class c instead, so |dev| is the sum of per-class floors.
///
/// Throws UsageError for an empty corpus or dev_fraction outside [0, 1), and
/// DataError for unknown holdout ids.
Split split(const std::vector<ParagraphRecord>& records, const SplitSpec& spec);

/// Moves every listed record out of train and appends it to dev (in the order
/// listed); records already in dev stay put. Duplicate ids are ignored.
Split inject_holdout(Split split, const std::vector<std::string>& holdout_ids);

/// Reads a holdout preset: one par_id per line; blank lines and lines
/// starting with '#' are ignored.
std::vector<std::string> parse_holdout_preset(std::string_view content);

}  // namespace pcld
