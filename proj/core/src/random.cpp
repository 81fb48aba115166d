#include "dsgso/random.hpp"

#include <random>

namespace dsgso {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed + kGolden) ^ mix(stream * kGolden + 0x632be59bd9b4e019ULL)) {}

RandomStream::result_type RandomStream::operator()() {
  state_ += kGolden;
  return mix(state_);
}

StandardSampler gaussian_sampler() {
  return [](RandomStream& rng, std::span<double> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& z : out) z = normal(rng);
  };
}

StandardSampler rademacher_sampler() {
  return [](RandomStream& rng, std::span<double> out) {
    for (double& z : out) z = (rng() >> 63) != 0 ? 1.0 : -1.0;
  };
}

}  // namespace dsgso
