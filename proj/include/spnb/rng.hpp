#pragma once

// Seeded random streams for simulation runs.
//
// Generator: xoshiro256** (Blackman & Vigna), state filled by SplitMix64.
// The integer sequence depends only on (seed, stream) and is identical on
// every platform. Uniform doubles take the top 53 bits, so Bernoulli draws
// are bit-reproducible as well. Gamma/Beta variates go through std::log and
// std::sqrt and are reproducible wherever libm is.

#include <cstdint>
#include <limits>

namespace spnb {

/// Sub-stream identifiers derived from one run seed.
enum class StreamId : std::uint64_t {
  kFeedback = 0,
  kPolicy = 1,
  kInstance = 2,
};

class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);
  RngStream(std::uint64_t seed, StreamId stream)
      : RngStream(seed, static_cast<std::uint64_t>(stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next(); }
  result_type next();

  /// Uniform on [0, 1) with 53 bits of resolution. One draw.
  double uniform();
  /// 1 with probability p, using exactly one uniform draw.
  int bernoulli(double p) { return uniform() < p ? 1 : 0; }
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the boost trick.
  double gamma(double shape);
  /// Beta(a, b) as a ratio of gammas.
  double beta(double a, double b);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  std::uint64_t draws_ = 0;
};

/// SplitMix64 finalizer, exposed for hashing and seeding.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace spnb
