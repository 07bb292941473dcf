#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace c2c {

// Seedable, splittable random stream.
//
// Streams are derived from (seed, key) so that independent consumers (one per
// vehicle, one for the arrival process) never share state. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distributions below are implemented here rather than taken from <random>
// because the standard distributions are implementation-defined and would
// make traces differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for `key` under `seed`.
  static Rng stream(std::uint64_t seed, std::string_view key);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Standard normal via Box-Muller (one value per call, no caching).
  double normal();
  // Exponential with the given rate (events per unit).
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace c2c
