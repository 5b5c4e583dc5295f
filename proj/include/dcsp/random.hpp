#pragma once

// Portable random streams. Every object class (dictionary, support, signal)
// of every node gets its own mt19937_64 engine whose seed is derived from the
// run seed with the splitmix64 finalizer:
//
//   stream_seed = mix64(mix64(seed ^ tag(class)) + node)
//
// Adding nodes therefore never perturbs the draws of existing nodes.
// Gaussians use Box-Muller on 53-bit uniforms; bounded integers use
// rejection sampling. The std:: distributions are avoided because their
// output is implementation-defined.

#include <cstdint>
#include <random>

namespace dcsp {

enum class StreamClass : std::uint64_t {
  Dictionary = 0x6469637469ULL,
  Support = 0x737570706fULL,
  Signal = 0x7369676e61ULL,
};

/// splitmix64 output function.
std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t seed, StreamClass cls, std::uint64_t node) noexcept;

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t seed, StreamClass cls, std::uint64_t node)
      : engine_(derive_seed(seed, cls, node)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal.
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dcsp
