#include "pcld/predictor.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcld/checkpoint.hpp"
#include "pcld/error.hpp"

namespace pcld {

std::string greedy_decode(const ModelParams& params, const Vocabulary& vocab, const TokenSequence& src,
                          std::size_t max_len) {
  if (max_len == 0) {
    throw UsageError("greedy_decode: max_len must be at least 1");
  }
  if (params.config.vocab_size != vocab.size()) {
    throw UsageError("greedy_decode: vocabulary size differs from the model's");
  }
  const Matrix enc_out = encode(params, src.ids);
  TokenSequence generated;
  std::vector<TokenId> tgt_in{Vocabulary::kPad};
  for (std::size_t step = 0; step < max_len && tgt_in.size() <= params.config.max_seq_len; ++step) {
    const Matrix logits = decode_logits(params, enc_out, tgt_in);
    const auto last = logits.row(logits.rows() - 1);
    TokenId best = 0;
    for (Eigen::Index j = 1; j < last.size(); ++j) {
      if (last(j) > last(best)) {
        best = static_cast<TokenId>(j);
      }
    }
    if (best == Vocabulary::kEos) {
      break;
    }
    generated.ids.push_back(best);
    tgt_in.push_back(best);
  }
  return decode(generated, vocab);
}

std::string greedy_decode(const Checkpoint& checkpoint, const Vocabulary& vocab, const TokenSequence& src,
                          std::size_t max_len) {
  return greedy_decode(checkpoint.params, vocab, src, max_len);
}

LabelDecision correct_out_of_class(std::string_view raw, int fallback,
                                   const std::set<std::string, std::less<>>& label_set) {
  if (fallback != 0 && fallback != 1) {
    throw UsageError(fmt::format("fallback class {} is not 0 or 1", fallback));
  }
  constexpr std::string_view kSpace = " \t\n\r\f\v";
  const auto first = raw.find_first_not_of(kSpace);
  const std::string_view trimmed =
      first == std::string_view::npos ? std::string_view{} : raw.substr(first, raw.find_last_not_of(kSpace) - first + 1);
  if (label_set.contains(trimmed) && (trimmed == "0" || trimmed == "1")) {
    return {trimmed == "1" ? 1 : 0, true};
  }
  return {fallback, false};
}

PredictionBatch predict_records(const ModelParams& params, const Vocabulary& vocab,
                                const std::vector<ParagraphRecord>& records, const PredictOptions& options) {
  PredictionBatch batch;
  batch.predictions.reserve(records.size());
  for (const auto& r : records) {
    Prediction p;
    p.par_id = r.par_id;
    p.raw_decoded = greedy_decode(params, vocab, encode_source(r.text, vocab, options.max_source_tokens),
                                  options.max_decode_len);
    const auto decision = correct_out_of_class(p.raw_decoded, options.fallback_class);
    p.label = decision.label;
    p.in_class = decision.in_class;
    batch.predictions.push_back(std::move(p));
  }
  batch.out_of_class_rate = out_of_class_rate(batch.predictions);
  return batch;
}

PredictionBatch predict_records(const Checkpoint& checkpoint, const Vocabulary& vocab,
                                const std::vector<ParagraphRecord>& records, const PredictOptions& options) {
  if (checkpoint.vocab_hash != vocab.digest()) {
    throw DataError("vocabulary does not match the checkpoint's vocab_hash");
  }
  return predict_records(checkpoint.params, vocab, records, options);
}

double out_of_class_rate(const std::vector<Prediction>& predictions) {
  if (predictions.empty()) {
    return 0.0;
  }
  const auto misses = std::count_if(predictions.begin(), predictions.end(), [](const auto& p) { return !p.in_class; });
  return static_cast<double>(misses) / static_cast<double>(predictions.size());
}

std::string format_submission(const std::vector<Prediction>& predictions) {
  std::string out;
  out.reserve(predictions.size() * 2);
  for (const auto& p : predictions) {
    out += p.label == 1 ? "1\n" : "0\n";
  }
  return out;
}

std::vector<int> parse_submission(std::string_view content) {
  std::vector<int> labels;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = content.size();
    }
    auto line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line == "0" || line == "1") {
      labels.push_back(line == "1" ? 1 : 0);
    } else {
      throw DataError(fmt::format("predictions line {}: expected 0 or 1, found '{}'", line_no, line));
    }
  }
  return labels;
}

std::string format_audit(const std::vector<Prediction>& predictions) {
  std::string out;
  for (const auto& p : predictions) {
    const nlohmann::json row{
        {"par_id", p.par_id}, {"raw_decoded", p.raw_decoded}, {"label", p.label}, {"in_class", p.in_class}};
    out += row.dump();
    out += '\n';
  }
  return out;
}

}  // namespace pcld
