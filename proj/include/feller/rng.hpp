#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace feller {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream keyed by (seed, stream id).
///
/// Output block j of stream s is philox(counter = (j, s), key = seed), so any
/// stream can be created independently of the others and reproduces bit for bit.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate (Box-Muller, one output per call).
  double normal();

  /// Standard exponential variate.
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const { return 2 * block_ - (have_ / 64); }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned have_ = 0;  // bits left in buffer_, 0, 64 or 128
};

/// SplitMix64 finalizer, used to derive independent seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace feller
