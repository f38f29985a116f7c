#include "fixpointrl/random_stream.hpp"

#include <cmath>
#include <numbers>

namespace fixpointrl {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RandomStream::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          StreamPurpose purpose) {
  const auto tag = static_cast<std::uint64_t>(purpose);
  return mix64(master ^ mix64(mix64(index) + tag * RandomStream::kGamma));
}

std::uint64_t stream_position(std::uint64_t key) {
  // kGamma is odd, so it has an inverse mod 2^64 (Newton iteration).
  std::uint64_t inv = RandomStream::kGamma;
  for (int i = 0; i < 6; ++i) inv *= 2 - RandomStream::kGamma * inv;
  return key * inv;
}

}  // namespace fixpointrl
