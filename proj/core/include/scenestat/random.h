#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace scenestat {

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; the helpers below replace the
/// implementation-defined std:: distributions so every draw is reproducible
/// bit-for-bit on any toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, stream ids...), e.g. (seed, batch index).
  /// Seeded through std::seed_seq, whose mixing algorithm is also standard.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via Box–Muller (both variates used).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace scenestat
