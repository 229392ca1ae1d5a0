#pragma once

#include <cstdint>
#include <random>

namespace hfcov {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of one random stream. Streams with distinct (master_seed, stream_id)
/// are seeded through a 64-bit mixer, so replications never share a state.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Independent sub-stream, used to separate e.g. path, sampling and noise draws.
  [[nodiscard]] RngSeed child(std::uint64_t tag) const {
    return {splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL)),
            tag};
  }

  [[nodiscard]] std::mt19937_64 engine() const {
    std::uint64_t s = splitmix64(master_seed ^ splitmix64(stream_id ^ 0xd1b54a32d192ed03ULL));
    return std::mt19937_64(s);
  }
};

// Sub-stream tags.
namespace stream {
inline constexpr std::uint64_t path = 1;
inline constexpr std::uint64_t sampling = 2;
inline constexpr std::uint64_t refine = 3;
inline constexpr std::uint64_t noise = 4;
inline constexpr std::uint64_t barrier = 5;
}  // namespace stream

}  // namespace hfcov
