#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcld/tokenizer.hpp"

namespace pcld {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Shape hyperparameters of the encoder-decoder.
struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t d_model = 64;
  std::size_t n_heads = 4;
  std::size_t d_ff = 128;
  std::size_t n_layers_enc = 2;
  std::size_t n_layers_dec = 2;
  std::size_t max_rel_distance = 8;
  std::size_t max_seq_len = kDefaultMaxSourceTokens;
  bool tie_embeddings = true;
  std::uint64_t seed = 0;

  std::size_t head_dim() const { return d_model / n_heads; }
  /// Throws UsageError on zero counts or d_model not divisible by n_heads.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

/// Q, K, V, O projections, each d_model x d_model. Head h owns columns
/// [h * head_dim, (h + 1) * head_dim) of Q, K, V and the matching rows of O.
struct AttentionParams {
  Matrix wq, wk, wv, wo;
};

struct FeedForwardParams {
  Matrix wi;  ///< d_model x d_ff
  Matrix wo;  ///< d_ff x d_model
};

struct EncoderLayerParams {
  RowVector self_norm;
  AttentionParams self_attn;
  RowVector ff_norm;
  FeedForwardParams ff;
};

struct DecoderLayerParams {
  RowVector self_norm;
  AttentionParams self_attn;
  RowVector cross_norm;
  AttentionParams cross_attn;
  RowVector ff_norm;
  FeedForwardParams ff;
};

/// Every trainable array. The relative-position tables are n_heads x
/// (2 * max_rel_distance + 1), indexed by the clamped offset key - query,
/// and shared by all layers of their stack. Cross attention has no bias.
struct ModelParams {
  ModelConfig config;
  Matrix embedding;  ///< vocab_size x d_model
  Matrix enc_rel_bias;
  Matrix dec_rel_bias;
  std::vector<EncoderLayerParams> encoder;
  RowVector enc_final_norm;
  std::vector<DecoderLayerParams> decoder;
  RowVector dec_final_norm;
  Matrix output;  ///< vocab_size x d_model; empty when tie_embeddings.
};

struct NamedArray {
  std::string name;
  std::span<double> values;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

struct ConstNamedArray {
  std::string name;
  std::span<const double> values;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

/// All arrays in the canonical order used by optimizers, checkpoints and
/// gradient checks: embedding, enc_rel_bias, dec_rel_bias, encoder layers,
/// enc_final_norm, decoder layers, dec_final_norm, output (if untied).
std::vector<NamedArray> named_arrays(ModelParams& params);
std::vector<ConstNamedArray> named_arrays(const ModelParams& params);

std::size_t parameter_count(const ModelParams& params);

/// Same shapes, all zeros.
ModelParams zeros_like(const ModelParams& params);

/// Weights ~ N(0, 1/d_model) drawn in canonical array order from Rng(config.seed);
/// norm scales 1; relative-position tables 0.
ModelParams init_params(const ModelConfig& config);

bool all_finite(const ModelParams& params);

struct AttentionResult {
  Matrix output;   ///< Tq x d_v
  Matrix weights;  ///< Tq x Tk; masked entries exactly 0.
};

/// Single-head scaled dot-product attention:
/// softmax_j(q_i . k_j / sqrt(d) + rel_bias(i, j)) over entries with mask(i, j)
/// true, applied to the rows of `values`. `rel_bias` may be empty (no bias).
/// Throws UsageError on a fully masked row or mismatched shapes.
AttentionResult scaled_dot_attention(const Matrix& queries, const Matrix& keys, const Matrix& values,
                                     const BoolMatrix& mask, const Matrix& rel_bias);

/// Column index into a relative-position table for the given offset.
std::size_t rel_bucket(std::ptrdiff_t key_minus_query, std::size_t max_rel_distance);

/// Encoder stack output (after its final norm), T_src x d_model.
Matrix encode(const ModelParams& params, std::span<const TokenId> src);

/// Decoder logits given an encoder output, T_tgt x vocab_size.
Matrix decode_logits(const ModelParams& params, const Matrix& encoder_out, std::span<const TokenId> tgt_in);

/// Decoder hidden states after the final norm, T_tgt x d_model. Logits are
/// these times the output matrix transposed (no extra scaling).
Matrix decode_hidden(const ModelParams& params, const Matrix& encoder_out, std::span<const TokenId> tgt_in);

/// Teacher-forced logits, tgt_len x vocab_size. Throws UsageError if either
/// sequence is empty, longer than max_seq_len, or holds an out-of-range id.
Matrix forward(const ModelParams& params, std::span<const TokenId> src, std::span<const TokenId> tgt_in);

/// Mean over non-pad positions of -log softmax(logits_t)[target_t].
/// pad_mask may be empty (nothing padded); true marks a padded position.
/// Throws UsageError when every position is padded.
double cross_entropy(const Matrix& logits, std::span<const TokenId> targets, std::span<const bool> pad_mask = {});

/// One teacher-forced training pair.
struct Seq2SeqExample {
  TokenSequence src;
  TokenSequence tgt_in;   ///< start token followed by targets[0 .. n-2]
  TokenSequence targets;
};

/// Shifts a target right behind the decoder start token (PAD).
Seq2SeqExample make_example(TokenSequence src, const TokenSequence& target);

/// Mean token cross-entropy over the batch. If `grads` is non-null it is
/// overwritten with the exact gradient of that mean; examples are
/// accumulated in batch order.
double loss_and_gradients(const ModelParams& params, std::span<const Seq2SeqExample> batch, ModelParams* grads);

/// Gradient of cross_entropy(forward(src, tgt_in), targets) for one example.
ModelParams backward(const ModelParams& params, std::span<const TokenId> src, std::span<const TokenId> tgt_in,
                     std::span<const TokenId> targets);

}  // namespace pcld
