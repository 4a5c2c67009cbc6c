#include "pcld/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pcld/error.hpp"

namespace pcld {

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw UsageError("Rng::uniform_below: bound must be positive");
  }
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = 0;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % bound;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = 0.0;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace pcld
