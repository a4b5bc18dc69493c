#pragma once

// Deterministic random stream for action selection.
//
// A thin wrapper over mt19937_64 with explicit bit-to-double conversion, so
// the draw sequence is pinned by the seed alone and identical across standard
// libraries (std::uniform_real_distribution makes no such promise).

#include <cstdint>
#include <random>

namespace otq {

class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  /// Raw 64-bit draw.
  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace otq
