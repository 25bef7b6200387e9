#pragma once

// Portable random streams for instance generation.
//
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not, so integer and Bernoulli draws are done here:
// integers by rejection sampling on the raw 64-bit output, probabilities by
// comparing the top 53 bits against p. Independent streams are derived from
// (seed, stream id) with the SplitMix64 finalizer; stream 0 feeds the
// objective and stream j + 1 feeds constraint j.

#include <cstdint>
#include <random>

namespace bddcut {

std::uint64_t splitmix64(std::uint64_t x);

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bddcut
