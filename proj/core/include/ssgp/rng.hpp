#pragma once

#include <array>
#include <cstdint>

namespace ssgp {

/// Identifies an independent random stream.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Stream of replication r in a run that starts at this stream.
  SeedSpec replica(std::uint64_t r) const noexcept { return {master_seed, stream_id + r}; }
};

/// Philox4x32-10 block: 128-bit counter and 64-bit key to 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal variates addressed by (master_seed, stream_id, draw index).
///
/// The Philox key comes from master_seed and the counter holds the stream id
/// and the draw block, so any number of threads can fill disjoint ranges or
/// streams and obtain the same numbers.
class NormalStream {
 public:
  explicit NormalStream(SeedSpec seed);
  /// Normal number `index` of this stream.
  double at(std::uint64_t index) const;
  /// Fills out[0..count) with draws first, first+1, ...
  void fill(double* out, std::uint64_t count, std::uint64_t first = 0) const;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  void pair(std::uint64_t block, double& z0, double& z1) const;
};

}  // namespace ssgp
