#include "ssgp/rng.hpp"

#include <cmath>
#include <numbers>

namespace ssgp {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// 53-bit uniform in (0, 1)
double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

NormalStream::NormalStream(SeedSpec seed) {
  const std::uint64_t key = splitmix64(seed.master_seed);
  key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  stream_lo_ = static_cast<std::uint32_t>(seed.stream_id);
  stream_hi_ = static_cast<std::uint32_t>(seed.stream_id >> 32);
}

void NormalStream::pair(std::uint64_t block, double& z0, double& z1) const {
  const auto r = philox4x32(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), stream_lo_, stream_hi_},
      key_);
  const double u1 = to_unit(r[0], r[1]);
  const double u2 = to_unit(r[2], r[3]);
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  z0 = rad * std::cos(ang);
  z1 = rad * std::sin(ang);
}

double NormalStream::at(std::uint64_t index) const {
  double z0, z1;
  pair(index / 2, z0, z1);
  return index % 2 == 0 ? z0 : z1;
}

void NormalStream::fill(double* out, std::uint64_t count, std::uint64_t first) const {
  std::uint64_t i = 0;
  if (first % 2 == 1 && count > 0) {
    out[i++] = at(first);
  }
  for (; i + 1 < count; i += 2) {
    pair((first + i) / 2, out[i], out[i + 1]);
  }
  if (i < count) out[i] = at(first + i);
}

}  // namespace ssgp
