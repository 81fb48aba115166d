#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>

namespace dsgso {

/// SplitMix64 generator keyed by (seed, stream index).
///
/// Every Monte Carlo trial draws from its own stream, so results do not
/// depend on how trials are scheduled across threads. Satisfies
/// UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

 private:
  std::uint64_t state_;
};

/// Fills the span with independent zero-mean, unit-variance variates.
using StandardSampler = std::function<void(RandomStream&, std::span<double>)>;

StandardSampler gaussian_sampler();
/// +-1 with equal probability.
StandardSampler rademacher_sampler();

}  // namespace dsgso
