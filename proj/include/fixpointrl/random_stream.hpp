#pragma once

#include <cstdint>

namespace fixpointrl {

/// Counter-based pseudo-random stream (SplitMix64 output function).
///
/// Draw n of a stream with key s is mix(s + (n + 1) * kGamma). Output is a
/// pure function of (key, counter), so streams are reproducible bit-for-bit
/// on every platform. Uniform reals are built from the top 53 bits; normal
/// variates use Box-Muller. No std:: distributions are involved, because
/// their output is implementation-defined.
class RandomStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit RandomStream(std::uint64_t key = 0) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [lo, hi].
  double uniform(double lo, double hi);
  /// Standard normal N(0, 1); consumes two draws.
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Purpose tags for derived streams.
enum class StreamPurpose : std::uint64_t {
  kAgent = 1,
  kModel = 2,
  kSector = 3,
};

/// Derive the key of an independent stream from (master seed, index, purpose).
///
/// key = mix64(master ^ mix64(mix64(index) + purpose * kGamma)). For a fixed
/// master and purpose the map index -> key is injective.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          StreamPurpose purpose);

/// Position of a key on the single global SplitMix64 sequence. Two streams
/// share a run of n outputs only if their positions differ by less than n.
std::uint64_t stream_position(std::uint64_t key);

}  // namespace fixpointrl
