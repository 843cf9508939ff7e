#pragma once

#include <cstdint>
#include <string_view>

namespace mfgsim {

// Deterministic PRNG used everywhere in the simulator. splitmix64 expands the
// root seed, xoshiro256** produces draws. Both are fixed published algorithms,
// so a given (seed, label) pair yields the same sequence on every platform.
// Distributions are implemented here rather than with <random> because the
// standard leaves distribution algorithms unspecified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for a named subsystem ("orders", "quality", ...).
  static Rng stream(std::uint64_t root_seed, std::string_view label);

  std::uint64_t next_u64();

  // Inclusive on both ends.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // [0, 1), 53-bit resolution.
  double uniform01();

  bool bernoulli(double p);

  // Mean-parameterized exponential via inverse CDF.
  double exponential(double mean);

 private:
  std::uint64_t s_[4];
};

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64_next(std::uint64_t& state);

}  // namespace mfgsim
