#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pcld/corpus.hpp"
#include "pcld/model.hpp"
#include "pcld/tokenizer.hpp"

namespace pcld {

struct Checkpoint;

struct Prediction {
  std::string par_id;
  std::string raw_decoded;
  int label = 0;
  bool in_class = false;
};

struct LabelDecision {
  int label = 0;
  bool in_class = false;
};

inline constexpr std::size_t kDefaultDecodeLength = 4;

/// Greedy decoding from the PAD start token: append the arg-max token
/// (lowest id on ties) until EOS or max_len tokens. Returns the decoded text.
/// Throws UsageError when max_len is 0.
std::string greedy_decode(const ModelParams& params, const Vocabulary& vocab, const TokenSequence& src,
                          std::size_t max_len = kDefaultDecodeLength);
std::string greedy_decode(const Checkpoint& checkpoint, const Vocabulary& vocab, const TokenSequence& src,
                          std::size_t max_len = kDefaultDecodeLength);

/// Out-of-class correction. The decoded string is trimmed of ASCII
/// whitespace; an exact member of `label_set` ("0"/"1") is returned as that
/// class, anything else becomes `fallback` with in_class = false.
LabelDecision correct_out_of_class(std::string_view raw, int fallback = 0,
                                   const std::set<std::string, std::less<>>& label_set = {"0", "1"});

struct PredictOptions {
  int fallback_class = 0;
  std::size_t max_source_tokens = kDefaultMaxSourceTokens;
  std::size_t max_decode_len = kDefaultDecodeLength;
};

struct PredictionBatch {
  std::vector<Prediction> predictions;
  double out_of_class_rate = 0.0;  ///< 0 for an empty batch.
};

/// One prediction per record, in input order. Throws DataError when the
/// vocabulary digest disagrees with the checkpoint.
PredictionBatch predict_records(const Checkpoint& checkpoint, const Vocabulary& vocab,
                                const std::vector<ParagraphRecord>& records, const PredictOptions& options = {});

/// Same, against bare parameters (no vocabulary check).
PredictionBatch predict_records(const ModelParams& params, const Vocabulary& vocab,
                                const std::vector<ParagraphRecord>& records, const PredictOptions& options = {});

double out_of_class_rate(const std::vector<Prediction>& predictions);

/// One integer label per line, LF endings.
std::string format_submission(const std::vector<Prediction>& predictions);

/// Parses a submission file back into labels. Throws DataError on lines other than 0/1.
std::vector<int> parse_submission(std::string_view content);

/// JSON lines of {par_id, raw_decoded, label, in_class}.
std::string format_audit(const std::vector<Prediction>& predictions);

}  // namespace pcld
