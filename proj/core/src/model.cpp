#include "pcld/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "pcld/error.hpp"
#include "pcld/random.hpp"

namespace pcld {

void ModelConfig::validate() const {
  if (vocab_size == 0 || d_model == 0 || n_heads == 0 || d_ff == 0 || n_layers_enc == 0 ||
      n_layers_dec == 0 || max_rel_distance == 0 || max_seq_len == 0) {
    throw UsageError("model config: every size must be at least 1");
  }
  if (d_model % n_heads != 0) {
    throw UsageError(fmt::format("model config: d_model {} not divisible by n_heads {}", d_model, n_heads));
  }
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"vocab_size", c.vocab_size},
                     {"d_model", c.d_model},
                     {"n_heads", c.n_heads},
                     {"d_ff", c.d_ff},
                     {"n_layers_enc", c.n_layers_enc},
                     {"n_layers_dec", c.n_layers_dec},
                     {"max_rel_distance", c.max_rel_distance},
                     {"max_seq_len", c.max_seq_len},
                     {"tie_embeddings", c.tie_embeddings},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  const ModelConfig defaults;
  c.vocab_size = j.value("vocab_size", defaults.vocab_size);
  c.d_model = j.value("d_model", defaults.d_model);
  c.n_heads = j.value("n_heads", defaults.n_heads);
  c.d_ff = j.value("d_ff", defaults.d_ff);
  c.n_layers_enc = j.value("n_layers_enc", defaults.n_layers_enc);
  c.n_layers_dec = j.value("n_layers_dec", defaults.n_layers_dec);
  c.max_rel_distance = j.value("max_rel_distance", defaults.max_rel_distance);
  c.max_seq_len = j.value("max_seq_len", defaults.max_seq_len);
  c.tie_embeddings = j.value("tie_embeddings", defaults.tie_embeddings);
  c.seed = j.value("seed", defaults.seed);
}

namespace {

template <typename Params, typename Fn>
void visit_attention(Params& attn, const std::string& prefix, Fn&& fn) {
  fn(prefix + ".wq", attn.wq);
  fn(prefix + ".wk", attn.wk);
  fn(prefix + ".wv", attn.wv);
  fn(prefix + ".wo", attn.wo);
}

// Canonical array order; checkpoints depend on it.
template <typename Params, typename Fn>
void visit_arrays(Params& p, Fn&& fn) {
  fn(std::string("embedding"), p.embedding);
  fn(std::string("enc_rel_bias"), p.enc_rel_bias);
  fn(std::string("dec_rel_bias"), p.dec_rel_bias);
  for (std::size_t l = 0; l < p.encoder.size(); ++l) {
    auto& layer = p.encoder[l];
    const auto prefix = fmt::format("encoder.{}", l);
    fn(prefix + ".self_norm", layer.self_norm);
    visit_attention(layer.self_attn, prefix + ".self_attn", fn);
    fn(prefix + ".ff_norm", layer.ff_norm);
    fn(prefix + ".ff.wi", layer.ff.wi);
    fn(prefix + ".ff.wo", layer.ff.wo);
  }
  fn(std::string("enc_final_norm"), p.enc_final_norm);
  for (std::size_t l = 0; l < p.decoder.size(); ++l) {
    auto& layer = p.decoder[l];
    const auto prefix = fmt::format("decoder.{}", l);
    fn(prefix + ".self_norm", layer.self_norm);
    visit_attention(layer.self_attn, prefix + ".self_attn", fn);
    fn(prefix + ".cross_norm", layer.cross_norm);
    visit_attention(layer.cross_attn, prefix + ".cross_attn", fn);
    fn(prefix + ".ff_norm", layer.ff_norm);
    fn(prefix + ".ff.wi", layer.ff.wi);
    fn(prefix + ".ff.wo", layer.ff.wo);
  }
  fn(std::string("dec_final_norm"), p.dec_final_norm);
  if (!p.config.tie_embeddings) {
    fn(std::string("output"), p.output);
  }
}

AttentionParams zero_attention(Eigen::Index d) {
  return {Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
}

ModelParams zero_params(const ModelConfig& c) {
  c.validate();
  const auto d = static_cast<Eigen::Index>(c.d_model);
  const auto ff = static_cast<Eigen::Index>(c.d_ff);
  const auto v = static_cast<Eigen::Index>(c.vocab_size);
  const auto buckets = static_cast<Eigen::Index>(2 * c.max_rel_distance + 1);
  const auto heads = static_cast<Eigen::Index>(c.n_heads);

  ModelParams p;
  p.config = c;
  p.embedding = Matrix::Zero(v, d);
  p.enc_rel_bias = Matrix::Zero(heads, buckets);
  p.dec_rel_bias = Matrix::Zero(heads, buckets);
  for (std::size_t l = 0; l < c.n_layers_enc; ++l) {
    p.encoder.push_back({RowVector::Zero(d), zero_attention(d), RowVector::Zero(d),
                         {Matrix::Zero(d, ff), Matrix::Zero(ff, d)}});
  }
  p.enc_final_norm = RowVector::Zero(d);
  for (std::size_t l = 0; l < c.n_layers_dec; ++l) {
    p.decoder.push_back({RowVector::Zero(d), zero_attention(d), RowVector::Zero(d), zero_attention(d),
                         RowVector::Zero(d), {Matrix::Zero(d, ff), Matrix::Zero(ff, d)}});
  }
  p.dec_final_norm = RowVector::Zero(d);
  if (!c.tie_embeddings) {
    p.output = Matrix::Zero(v, d);
  }
  return p;
}

}  // namespace

std::vector<NamedArray> named_arrays(ModelParams& params) {
  std::vector<NamedArray> out;
  visit_arrays(params, [&](const std::string& name, auto& array) {
    out.push_back({name, std::span<double>(array.data(), static_cast<std::size_t>(array.size())), array.rows(),
                   array.cols()});
  });
  return out;
}

std::vector<ConstNamedArray> named_arrays(const ModelParams& params) {
  std::vector<ConstNamedArray> out;
  visit_arrays(params, [&](const std::string& name, const auto& array) {
    out.push_back({name, std::span<const double>(array.data(), static_cast<std::size_t>(array.size())),
                   array.rows(), array.cols()});
  });
  return out;
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t n = 0;
  for (const auto& a : named_arrays(params)) {
    n += a.values.size();
  }
  return n;
}

ModelParams zeros_like(const ModelParams& params) { return zero_params(params.config); }

ModelParams init_params(const ModelConfig& config) {
  ModelParams p = zero_params(config);
  Rng rng(config.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.d_model));
  for (auto& array : named_arrays(p)) {
    if (array.name.ends_with("rel_bias")) {
      continue;
    }
    const bool is_norm = array.name.ends_with("norm");
    for (auto& x : array.values) {
      x = is_norm ? 1.0 : scale * rng.normal();
    }
  }
  return p;
}

bool all_finite(const ModelParams& params) {
  for (const auto& a : named_arrays(params)) {
    for (const double x : a.values) {
      if (!std::isfinite(x)) {
        return false;
      }
    }
  }
  return true;
}

std::size_t rel_bucket(std::ptrdiff_t key_minus_query, std::size_t max_rel_distance) {
  const auto r = static_cast<std::ptrdiff_t>(max_rel_distance);
  return static_cast<std::size_t>(std::clamp(key_minus_query, -r, r) + r);
}

namespace {

constexpr double kNormEps = 1e-6;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

// Row-wise softmax restricted to mask-true entries; masked entries become 0.
void masked_softmax_rows(Matrix& scores, const BoolMatrix& mask) {
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    double max_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      if (mask(i, j)) {
        max_score = std::max(max_score, scores(i, j));
      }
    }
    if (max_score == -std::numeric_limits<double>::infinity()) {
      throw UsageError(fmt::format("attention: every position masked in row {}", i));
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      const double w = mask(i, j) ? std::exp(scores(i, j) - max_score) : 0.0;
      scores(i, j) = w;
      total += w;
    }
    scores.row(i) /= total;
  }
}

BoolMatrix full_mask(Eigen::Index tq, Eigen::Index tk) { return BoolMatrix::Constant(tq, tk, true); }

BoolMatrix causal_mask(Eigen::Index t) {
  BoolMatrix m(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < t; ++j) {
      m(i, j) = j <= i;
    }
  }
  return m;
}

struct NormCache {
  Matrix normed;
  Eigen::VectorXd inv_rms;
};

Matrix rms_forward(const Matrix& x, const RowVector& scale, NormCache* cache) {
  const double d = static_cast<double>(x.cols());
  Eigen::VectorXd inv_rms(x.rows());
  Matrix normed(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    inv_rms(i) = 1.0 / std::sqrt(x.row(i).squaredNorm() / d + kNormEps);
    normed.row(i) = x.row(i) * inv_rms(i);
  }
  Matrix out = normed.array().rowwise() * scale.array();
  if (cache != nullptr) {
    cache->normed = std::move(normed);
    cache->inv_rms = std::move(inv_rms);
  }
  return out;
}

Matrix rms_backward(const Matrix& d_out, const RowVector& scale, const NormCache& cache, RowVector& d_scale) {
  const double d = static_cast<double>(d_out.cols());
  d_scale += (d_out.array() * cache.normed.array()).colwise().sum().matrix();
  const Matrix d_normed = d_out.array().rowwise() * scale.array();
  Matrix d_x(d_out.rows(), d_out.cols());
  for (Eigen::Index i = 0; i < d_out.rows(); ++i) {
    const double proj = d_normed.row(i).dot(cache.normed.row(i)) / d;
    d_x.row(i) = (d_normed.row(i) - proj * cache.normed.row(i)) * cache.inv_rms(i);
  }
  return d_x;
}

// GELU, tanh approximation; smooth everywhere.
double gelu(double x) { return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x))); }

double gelu_grad(double x) {
  const double t = std::tanh(kGeluC * (x + kGeluA * x * x * x));
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
}

struct FeedForwardCache {
  Matrix input;
  Matrix pre;
  Matrix act;
};

Matrix ff_forward(const FeedForwardParams& p, const Matrix& x, FeedForwardCache* cache) {
  Matrix pre = x * p.wi;
  Matrix act = pre.unaryExpr([](double v) { return gelu(v); });
  Matrix out = act * p.wo;
  if (cache != nullptr) {
    cache->input = x;
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
  return out;
}

Matrix ff_backward(const FeedForwardParams& p, const FeedForwardCache& cache, const Matrix& d_out,
                   FeedForwardParams& grads) {
  grads.wo.noalias() += cache.act.transpose() * d_out;
  const Matrix d_act = d_out * p.wo.transpose();
  const Matrix d_pre = d_act.array() * cache.pre.unaryExpr([](double v) { return gelu_grad(v); }).array();
  grads.wi.noalias() += cache.input.transpose() * d_pre;
  return d_pre * p.wi.transpose();
}

struct AttentionCache {
  Matrix xq, xkv;
  Matrix q, k, v;
  Matrix context;
  std::vector<Matrix> probs;
  BoolMatrix mask;
};

// Dense Tq x Tk bias for one head from a relative-position table.
Matrix bias_for_head(const Matrix& table, Eigen::Index head, Eigen::Index tq, Eigen::Index tk,
                     std::size_t max_rel) {
  Matrix b(tq, tk);
  for (Eigen::Index i = 0; i < tq; ++i) {
    for (Eigen::Index j = 0; j < tk; ++j) {
      b(i, j) = table(head, static_cast<Eigen::Index>(rel_bucket(j - i, max_rel)));
    }
  }
  return b;
}

Matrix mha_forward(const AttentionParams& p, const ModelConfig& cfg, const Matrix& xq, const Matrix& xkv,
                   const BoolMatrix& mask, const Matrix* bias_table, AttentionCache* cache) {
  const auto dh = static_cast<Eigen::Index>(cfg.head_dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Matrix q = xq * p.wq;
  Matrix k = xkv * p.wk;
  Matrix v = xkv * p.wv;
  Matrix context(xq.rows(), q.cols());
  std::vector<Matrix> probs;
  probs.reserve(cfg.n_heads);
  for (Eigen::Index h = 0; h < static_cast<Eigen::Index>(cfg.n_heads); ++h) {
    Matrix scores = (q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose()) * scale;
    if (bias_table != nullptr) {
      scores += bias_for_head(*bias_table, h, scores.rows(), scores.cols(), cfg.max_rel_distance);
    }
    masked_softmax_rows(scores, mask);
    context.middleCols(h * dh, dh) = scores * v.middleCols(h * dh, dh);
    probs.push_back(std::move(scores));
  }
  Matrix out = context * p.wo;
  if (cache != nullptr) {
    cache->xq = xq;
    cache->xkv = xkv;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->context = std::move(context);
    cache->probs = std::move(probs);
    cache->mask = mask;
  }
  return out;
}

struct AttentionInputGrads {
  Matrix d_xq;
  Matrix d_xkv;
};

AttentionInputGrads mha_backward(const AttentionParams& p, const ModelConfig& cfg, const AttentionCache& c,
                                 const Matrix& d_out, AttentionParams& grads, Matrix* bias_grad) {
  const auto dh = static_cast<Eigen::Index>(cfg.head_dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  grads.wo.noalias() += c.context.transpose() * d_out;
  const Matrix d_context = d_out * p.wo.transpose();

  Matrix d_q = Matrix::Zero(c.q.rows(), c.q.cols());
  Matrix d_k = Matrix::Zero(c.k.rows(), c.k.cols());
  Matrix d_v = Matrix::Zero(c.v.rows(), c.v.cols());
  for (Eigen::Index h = 0; h < static_cast<Eigen::Index>(cfg.n_heads); ++h) {
    const Matrix& probs = c.probs[static_cast<std::size_t>(h)];
    const auto d_ctx_h = d_context.middleCols(h * dh, dh);
    const Matrix d_probs = d_ctx_h * c.v.middleCols(h * dh, dh).transpose();
    d_v.middleCols(h * dh, dh).noalias() += probs.transpose() * d_ctx_h;
    // Softmax Jacobian; masked entries have zero probability and so zero gradient.
    const Eigen::VectorXd row_dot = (d_probs.array() * probs.array()).rowwise().sum();
    const Matrix d_scores = probs.array() * (d_probs.colwise() - row_dot).array();
    if (bias_grad != nullptr) {
      for (Eigen::Index i = 0; i < d_scores.rows(); ++i) {
        for (Eigen::Index j = 0; j < d_scores.cols(); ++j) {
          if (c.mask(i, j)) {
            (*bias_grad)(h, static_cast<Eigen::Index>(rel_bucket(j - i, cfg.max_rel_distance))) += d_scores(i, j);
          }
        }
      }
    }
    d_q.middleCols(h * dh, dh).noalias() += scale * d_scores * c.k.middleCols(h * dh, dh);
    d_k.middleCols(h * dh, dh).noalias() += scale * d_scores.transpose() * c.q.middleCols(h * dh, dh);
  }
  grads.wq.noalias() += c.xq.transpose() * d_q;
  grads.wk.noalias() += c.xkv.transpose() * d_k;
  grads.wv.noalias() += c.xkv.transpose() * d_v;
  return {d_q * p.wq.transpose(), d_k * p.wk.transpose() + d_v * p.wv.transpose()};
}

struct EncoderLayerCache {
  NormCache self_norm;
  AttentionCache self_attn;
  NormCache ff_norm;
  FeedForwardCache ff;
};

struct DecoderLayerCache {
  NormCache self_norm;
  AttentionCache self_attn;
  NormCache cross_norm;
  AttentionCache cross_attn;
  NormCache ff_norm;
  FeedForwardCache ff;
};

struct EncoderTrace {
  std::vector<EncoderLayerCache> layers;
  NormCache final_norm;
};

struct DecoderTrace {
  std::vector<DecoderLayerCache> layers;
  NormCache final_norm;
};

void check_sequence(const ModelConfig& cfg, std::span<const TokenId> ids, const char* what) {
  if (ids.empty()) {
    throw UsageError(fmt::format("{} sequence is empty", what));
  }
  if (ids.size() > cfg.max_seq_len) {
    throw UsageError(fmt::format("{} sequence length {} exceeds max_seq_len {}", what, ids.size(), cfg.max_seq_len));
  }
  for (const auto id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= cfg.vocab_size) {
      throw UsageError(fmt::format("{} token id {} outside vocabulary of size {}", what, id, cfg.vocab_size));
    }
  }
}

Matrix embed(const Matrix& embedding, std::span<const TokenId> ids) {
  Matrix x(static_cast<Eigen::Index>(ids.size()), embedding.cols());
  for (std::size_t t = 0; t < ids.size(); ++t) {
    x.row(static_cast<Eigen::Index>(t)) = embedding.row(ids[t]);
  }
  return x;
}

Matrix run_encoder(const ModelParams& p, std::span<const TokenId> src, EncoderTrace* trace) {
  check_sequence(p.config, src, "source");
  Matrix x = embed(p.embedding, src);
  const BoolMatrix mask = full_mask(x.rows(), x.rows());
  if (trace != nullptr) {
    trace->layers.resize(p.encoder.size());
  }
  for (std::size_t l = 0; l < p.encoder.size(); ++l) {
    const auto& layer = p.encoder[l];
    EncoderLayerCache* c = trace != nullptr ? &trace->layers[l] : nullptr;
    const Matrix h1 = rms_forward(x, layer.self_norm, c ? &c->self_norm : nullptr);
    x += mha_forward(layer.self_attn, p.config, h1, h1, mask, &p.enc_rel_bias, c ? &c->self_attn : nullptr);
    const Matrix h2 = rms_forward(x, layer.ff_norm, c ? &c->ff_norm : nullptr);
    x += ff_forward(layer.ff, h2, c ? &c->ff : nullptr);
  }
  return rms_forward(x, p.enc_final_norm, trace ? &trace->final_norm : nullptr);
}

Matrix run_decoder(const ModelParams& p, const Matrix& enc_out, std::span<const TokenId> tgt_in,
                   DecoderTrace* trace) {
  check_sequence(p.config, tgt_in, "decoder input");
  if (enc_out.cols() != static_cast<Eigen::Index>(p.config.d_model)) {
    throw UsageError("decoder: encoder output width does not match d_model");
  }
  Matrix y = embed(p.embedding, tgt_in);
  const BoolMatrix self_mask = causal_mask(y.rows());
  const BoolMatrix cross_mask = full_mask(y.rows(), enc_out.rows());
  if (trace != nullptr) {
    trace->layers.resize(p.decoder.size());
  }
  for (std::size_t l = 0; l < p.decoder.size(); ++l) {
    const auto& layer = p.decoder[l];
    DecoderLayerCache* c = trace != nullptr ? &trace->layers[l] : nullptr;
    const Matrix h1 = rms_forward(y, layer.self_norm, c ? &c->self_norm : nullptr);
    y += mha_forward(layer.self_attn, p.config, h1, h1, self_mask, &p.dec_rel_bias, c ? &c->self_attn : nullptr);
    const Matrix h2 = rms_forward(y, layer.cross_norm, c ? &c->cross_norm : nullptr);
    y += mha_forward(layer.cross_attn, p.config, h2, enc_out, cross_mask, nullptr, c ? &c->cross_attn : nullptr);
    const Matrix h3 = rms_forward(y, layer.ff_norm, c ? &c->ff_norm : nullptr);
    y += ff_forward(layer.ff, h3, c ? &c->ff : nullptr);
  }
  return rms_forward(y, p.dec_final_norm, trace ? &trace->final_norm : nullptr);
}

const Matrix& output_matrix(const ModelParams& p) { return p.config.tie_embeddings ? p.embedding : p.output; }

// Scatter-adds row gradients into embedding rows.
void accumulate_embedding(Matrix& d_embedding, std::span<const TokenId> ids, const Matrix& d_rows) {
  for (std::size_t t = 0; t < ids.size(); ++t) {
    d_embedding.row(ids[t]) += d_rows.row(static_cast<Eigen::Index>(t));
  }
}

// Accumulates gradients of `weight * sum_t CE_t` for one example and returns
// the unweighted summed loss.
double accumulate_example(const ModelParams& p, const Seq2SeqExample& ex, double weight, ModelParams& g) {
  if (ex.targets.length() != ex.tgt_in.length()) {
    throw UsageError("targets and decoder input differ in length");
  }
  EncoderTrace enc_trace;
  DecoderTrace dec_trace;
  const Matrix enc_out = run_encoder(p, ex.src.ids, &enc_trace);
  const Matrix dec_out = run_decoder(p, enc_out, ex.tgt_in.ids, &dec_trace);
    const Matrix& w_out = output_matrix(p);
  const Matrix logits = dec_out * w_out.transpose();

  double loss = 0.0;
  Matrix d_logits(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    const auto target = ex.targets.ids[static_cast<std::size_t>(t)];
    if (target < 0 || static_cast<std::size_t>(target) >= p.config.vocab_size) {
      throw UsageError(fmt::format("target id {} outside vocabulary", target));
    }
    const double max_logit = logits.row(t).maxCoeff();
    const RowVector e = (logits.row(t).array() - max_logit).exp().matrix();
    const double z = e.sum();
    loss += std::log(z) + max_logit - logits(t, target);
    d_logits.row(t) = e / z;
    d_logits(t, target) -= 1.0;
  }
  d_logits *= weight;

  Matrix& d_w_out = p.config.tie_embeddings ? g.embedding : g.output;
  d_w_out.noalias() += d_logits.transpose() * dec_out;
  Matrix d_y = rms_backward(d_logits * w_out, p.dec_final_norm, dec_trace.final_norm, g.dec_final_norm);

  Matrix d_enc_out = Matrix::Zero(enc_out.rows(), enc_out.cols());
  for (std::size_t l = p.decoder.size(); l-- > 0;) {
    const auto& layer = p.decoder[l];
    auto& gl = g.decoder[l];
    const auto& c = dec_trace.layers[l];

    const Matrix d_h3 = ff_backward(layer.ff, c.ff, d_y, gl.ff);
    d_y += rms_backward(d_h3, layer.ff_norm, c.ff_norm, gl.ff_norm);

    const auto cross = mha_backward(layer.cross_attn, p.config, c.cross_attn, d_y, gl.cross_attn, nullptr);
    d_enc_out += cross.d_xkv;
    d_y += rms_backward(cross.d_xq, layer.cross_norm, c.cross_norm, gl.cross_norm);

    const auto self = mha_backward(layer.self_attn, p.config, c.self_attn, d_y, gl.self_attn, &g.dec_rel_bias);
    d_y += rms_backward(self.d_xq + self.d_xkv, layer.self_norm, c.self_norm, gl.self_norm);
  }
  accumulate_embedding(g.embedding, ex.tgt_in.ids, d_y);

  Matrix d_x = rms_backward(d_enc_out, p.enc_final_norm, enc_trace.final_norm, g.enc_final_norm);
  for (std::size_t l = p.encoder.size(); l-- > 0;) {
    const auto& layer = p.encoder[l];
    auto& gl = g.encoder[l];
    const auto& c = enc_trace.layers[l];

    const Matrix d_h2 = ff_backward(layer.ff, c.ff, d_x, gl.ff);
    d_x += rms_backward(d_h2, layer.ff_norm, c.ff_norm, gl.ff_norm);

    const auto self = mha_backward(layer.self_attn, p.config, c.self_attn, d_x, gl.self_attn, &g.enc_rel_bias);
    d_x += rms_backward(self.d_xq + self.d_xkv, layer.self_norm, c.self_norm, gl.self_norm);
  }
  accumulate_embedding(g.embedding, ex.src.ids, d_x);
  return loss;
}

}  // namespace

AttentionResult scaled_dot_attention(const Matrix& queries, const Matrix& keys, const Matrix& values,
                                     const BoolMatrix& mask, const Matrix& rel_bias) {
  if (queries.cols() != keys.cols() || keys.rows() != values.rows() || mask.rows() != queries.rows() ||
      mask.cols() != keys.rows()) {
    throw UsageError("attention: non-conforming shapes");
  }
  if (rel_bias.size() != 0 && (rel_bias.rows() != queries.rows() || rel_bias.cols() != keys.rows())) {
    throw UsageError("attention: bias shape must be Tq x Tk");
  }
  const double scale = queries.cols() > 0 ? 1.0 / std::sqrt(static_cast<double>(queries.cols())) : 1.0;
  Matrix weights = (queries * keys.transpose()) * scale;
  if (rel_bias.size() != 0) {
    weights += rel_bias;
  }
  masked_softmax_rows(weights, mask);
  Matrix output = weights * values;
  return {std::move(output), std::move(weights)};
}

Matrix encode(const ModelParams& params, std::span<const TokenId> src) { return run_encoder(params, src, nullptr); }

Matrix decode_hidden(const ModelParams& params, const Matrix& encoder_out, std::span<const TokenId> tgt_in) {
  return run_decoder(params, encoder_out, tgt_in, nullptr);
}

Matrix decode_logits(const ModelParams& params, const Matrix& encoder_out, std::span<const TokenId> tgt_in) {
  const Matrix hidden = run_decoder(params, encoder_out, tgt_in, nullptr);
  return hidden * output_matrix(params).transpose();
}

Matrix forward(const ModelParams& params, std::span<const TokenId> src, std::span<const TokenId> tgt_in) {
  return decode_logits(params, encode(params, src), tgt_in);
}

double cross_entropy(const Matrix& logits, std::span<const TokenId> targets, std::span<const bool> pad_mask) {
  if (targets.size() != static_cast<std::size_t>(logits.rows())) {
    throw UsageError("cross_entropy: one target per logits row required");
  }
  if (!pad_mask.empty() && pad_mask.size() != targets.size()) {
    throw UsageError("cross_entropy: pad mask length differs from targets");
  }
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (!pad_mask.empty() && pad_mask[t]) {
      continue;
    }
    const auto row = logits.row(static_cast<Eigen::Index>(t));
    if (targets[t] < 0 || targets[t] >= row.size()) {
      throw UsageError(fmt::format("cross_entropy: target {} out of range", targets[t]));
    }
    const double max_logit = row.maxCoeff();
    const double lse = std::log((row.array() - max_logit).exp().sum()) + max_logit;
    total += lse - row(targets[t]);
    ++counted;
  }
  if (counted == 0) {
    throw UsageError("cross_entropy: every position is padded");
  }
  return total / static_cast<double>(counted);
}

Seq2SeqExample make_example(TokenSequence src, const TokenSequence& target) {
  Seq2SeqExample ex;
  ex.src = std::move(src);
  ex.targets = target;
  ex.tgt_in.ids.reserve(target.length());
  ex.tgt_in.ids.push_back(Vocabulary::kPad);
  for (std::size_t i = 0; i + 1 < target.length(); ++i) {
    ex.tgt_in.ids.push_back(target.ids[i]);
  }
  return ex;
}

double loss_and_gradients(const ModelParams& params, std::span<const Seq2SeqExample> batch, ModelParams* grads) {
  std::size_t tokens = 0;
  for (const auto& ex : batch) {
    tokens += ex.targets.length();
  }
  if (tokens == 0) {
    throw UsageError("loss_and_gradients: batch has no target tokens");
  }
  const double weight = 1.0 / static_cast<double>(tokens);
  if (grads == nullptr) {
    double total = 0.0;
    for (const auto& ex : batch) {
      const Matrix logits = forward(params, ex.src.ids, ex.tgt_in.ids);
      total += cross_entropy(logits, ex.targets.ids) * static_cast<double>(ex.targets.length());
    }
    return total * weight;
  }
  *grads = zeros_like(params);
  double total = 0.0;
  for (const auto& ex : batch) {
    total += accumulate_example(params, ex, weight, *grads);
  }
  return total * weight;
}

ModelParams backward(const ModelParams& params, std::span<const TokenId> src, std::span<const TokenId> tgt_in,
                     std::span<const TokenId> targets) {
  Seq2SeqExample ex{TokenSequence{{src.begin(), src.end()}}, TokenSequence{{tgt_in.begin(), tgt_in.end()}},
                    TokenSequence{{targets.begin(), targets.end()}}};
  ModelParams grads;
  loss_and_gradients(params, std::span<const Seq2SeqExample>(&ex, 1), &grads);
  return grads;
}

}  // namespace pcld
