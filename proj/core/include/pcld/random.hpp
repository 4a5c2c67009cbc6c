#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace pcld {

/// Seeded generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not, so every derived draw
/// (bounded integers, uniform reals, normals) is implemented here. Any change
/// to these routines changes split membership and initial weights, so the
/// algorithm version is exposed and recorded in run manifests.
class Rng {
 public:
  static constexpr int kAlgorithmVersion = 1;
  static constexpr const char* kAlgorithmName = "mt19937_64/rejection/box-muller v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound) by rejection sampling; bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform real in [0, 1) with 53 bits of precision.
  double uniform01();

  /// Standard normal via Box-Muller (no cached spare, so each call consumes two draws).
  double normal();

  /// In-place Fisher-Yates shuffle: for i = n-1 down to 1, swap(i, uniform_below(i+1)).
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcld
