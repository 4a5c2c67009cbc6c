#include "pcld/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "pcld/error.hpp"
#include "pcld/random.hpp"

namespace pcld {

Split split(const std::vector<ParagraphRecord>& records, const SplitSpec& spec) {
  if (records.empty()) {
    throw UsageError("split: corpus is empty");
  }
  if (!(spec.dev_fraction >= 0.0 && spec.dev_fraction < 1.0)) {
    throw UsageError(fmt::format("split: dev_fraction {} outside [0, 1)", spec.dev_fraction));
  }

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<bool> in_dev(records.size(), false);
  if (!spec.stratify) {
    const auto dev_size =
        static_cast<std::size_t>(std::floor(spec.dev_fraction * static_cast<double>(records.size())));
    for (std::size_t i = 0; i < dev_size; ++i) {
      in_dev[order[i]] = true;
    }
  } else {
    std::unordered_map<int, std::size_t> class_sizes;
    for (const auto& r : records) {
      ++class_sizes[r.binary_label.value_or(-1)];
    }
    std::unordered_map<int, std::size_t> quota;
    for (const auto& [cls, n] : class_sizes) {
      quota[cls] = static_cast<std::size_t>(std::floor(spec.dev_fraction * static_cast<double>(n)));
    }
    for (const auto idx : order) {
      auto& q = quota[records[idx].binary_label.value_or(-1)];
      if (q > 0) {
        in_dev[idx] = true;
        --q;
      }
    }
  }

  Split result;
  for (const auto idx : order) {
    (in_dev[idx] ? result.dev : result.train).push_back(records[idx]);
  }
  return inject_holdout(std::move(result), spec.holdout_ids);
}

Split inject_holdout(Split split, const std::vector<std::string>& holdout_ids) {
  std::unordered_set<std::string> in_dev;
  for (const auto& r : split.dev) {
    in_dev.insert(r.par_id);
  }
  std::unordered_map<std::string, std::size_t> train_pos;
  for (std::size_t i = 0; i < split.train.size(); ++i) {
    train_pos.emplace(split.train[i].par_id, i);
  }

  std::vector<std::size_t> moving;
  std::unordered_set<std::string> requested;
  for (const auto& id : holdout_ids) {
    if (!requested.insert(id).second || in_dev.contains(id)) {
      continue;
    }
    const auto it = train_pos.find(id);
    if (it == train_pos.end()) {
      throw DataError(fmt::format("holdout id '{}' not found in corpus", id));
    }
    moving.push_back(it->second);
  }
  if (moving.empty()) {
    return split;
  }

  std::vector<bool> moved(split.train.size(), false);
  for (const auto idx : moving) {
    split.dev.push_back(split.train[idx]);
    moved[idx] = true;
  }
  std::vector<ParagraphRecord> remaining;
  remaining.reserve(split.train.size() - moving.size());
  for (std::size_t i = 0; i < split.train.size(); ++i) {
    if (!moved[i]) {
      remaining.push_back(std::move(split.train[i]));
    }
  }
  split.train = std::move(remaining);
  return split;
}

std::vector<std::string> parse_holdout_preset(std::string_view content) {
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = content.size();
    }
    auto line = content.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    ids.emplace_back(line);
  }
  return ids;
}

}  // namespace pcld
