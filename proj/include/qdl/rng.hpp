#pragma once

#include <cstdint>
#include <random>

namespace qdl {

// Deterministic 64-bit generator. Draws are built from raw engine output
// rather than std:: distributions so sequences are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for one protocol round. Serial and parallel drivers
  // that use the same (seed, round) pair see the same draws.
  static Rng for_round(std::uint64_t seed, std::uint64_t round);

  std::uint64_t next_u64() { return engine_(); }
  bool bit() { return (engine_() >> 63) != 0; }

  // Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qdl
