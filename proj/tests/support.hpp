#pragma once

// Helpers shared by the unit and acceptance suites.

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pcld/corpus.hpp"
#include "pcld/model.hpp"
#include "pcld/random.hpp"
#include "pcld/textprep.hpp"
#include "pcld/tokenizer.hpp"

namespace pcld::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pcld-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<ParagraphRecord> cleaned_synthetic(std::size_t n, double pos_rate, std::uint64_t seed) {
  auto records = generate_synthetic(n, pos_rate, seed);
  for (auto& r : records) {
    r.text = clean(r.text).text;
  }
  return records;
}

inline std::vector<std::string> texts_of(const std::vector<ParagraphRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) {
    out.push_back(r.text);
  }
  return out;
}

// 2+2 layers, d_model 16.
inline ModelConfig tiny_config(std::size_t vocab_size, std::uint64_t seed) {
  ModelConfig c;
  c.vocab_size = vocab_size;
  c.d_model = 16;
  c.n_heads = 2;
  c.d_ff = 32;
  c.n_layers_enc = 2;
  c.n_layers_dec = 2;
  c.max_rel_distance = 4;
  c.max_seq_len = 16;
  c.seed = seed;
  return c;
}

// Random weights everywhere, including the bias tables and norm scales, so
// no parameter sits at a special point.
inline ModelParams randomized_params(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p = init_params(config);
  Rng rng(seed);
  for (auto& a : named_arrays(p)) {
    const bool norm = a.name.ends_with("norm");
    const bool bias = a.name.ends_with("rel_bias");
    for (auto& x : a.values) {
      if (norm) {
        x = 1.0 + 0.2 * rng.normal();
      } else if (bias) {
        x = 0.3 * rng.normal();
      }
    }
  }
  return p;
}

inline TokenSequence random_tokens(Rng& rng, std::size_t length, std::size_t vocab_size, TokenId lowest = 3) {
  TokenSequence s;
  for (std::size_t i = 0; i < length; ++i) {
    s.ids.push_back(static_cast<TokenId>(lowest + rng.uniform_below(vocab_size - lowest)));
  }
  return s;
}

// worst_rel covers entries above the absolute floor, passing or not.
struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst_rel = 0.0;
  std::string worst_entry;
  double max_abs_diff = 0.0;
  double max_abs_grad = 0.0;
};

// Central differences of the batch loss against `analytic`, every entry.
// An entry passes when |a - n| <= abs_floor or |a - n| <= rel_tol * max(|a|, |n|).
inline GradCheckResult finite_difference_check(ModelParams params, std::span<const Seq2SeqExample> batch,
                                               const ModelParams& analytic, double h, double rel_tol,
                                               double abs_floor) {
  GradCheckResult r;
  auto arrays = named_arrays(params);
  const auto grads = named_arrays(analytic);
  for (std::size_t a = 0; a < arrays.size(); ++a) {
    for (std::size_t i = 0; i < arrays[a].values.size(); ++i) {
      double& x = arrays[a].values[i];
      const double saved = x;
      x = saved + h;
      const double up = loss_and_gradients(params, batch, nullptr);
      x = saved - h;
      const double down = loss_and_gradients(params, batch, nullptr);
      x = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double an = grads[a].values[i];
      const double diff = std::abs(an - numeric);
      const double scale = std::max(std::abs(an), std::abs(numeric));
      const double rel = scale > 0.0 ? diff / scale : 0.0;
      ++r.checked;
      r.max_abs_diff = std::max(r.max_abs_diff, diff);
      r.max_abs_grad = std::max(r.max_abs_grad, std::abs(an));
      const bool ok = diff <= abs_floor || diff <= rel_tol * scale;
      if (!ok) {
        ++r.failures;
      }
      if (diff > abs_floor && rel > r.worst_rel) {
        r.worst_rel = rel;
        r.worst_entry = arrays[a].name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return r;
}

}  // namespace pcld::testing
