#pragma once

#include <cstdint>

namespace auditcount {

/// SplitMix64. Deterministic across platforms, unlike the distributions in
/// <random>, which is what certificates and seed-replay need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value with exactly `bits` random low bits (bits in [0,64]).
  std::uint64_t next_bits(int bits) {
    if (bits <= 0) return 0;
    std::uint64_t v = next();
    return bits >= 64 ? v : (v & ((std::uint64_t{1} << bits) - 1));
  }

 private:
  std::uint64_t state_;
};

/// Trial j of a search at level m draws from stream_seed(base, tag, m, j),
/// so replays are independent of trial order and of how many trials ran.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t m, std::uint64_t trial) {
  Rng mix(base ^ (tag * 0x9e3779b97f4a7c15ULL) ^ (m << 32) ^ trial);
  mix.next();
  return mix.next();
}

}  // namespace auditcount
