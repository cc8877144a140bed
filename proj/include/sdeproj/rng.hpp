#pragma once

#include <cstdint>

namespace sdeproj {

// One SplitMix64 step; also the mixer used to derive stream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Order-independent key derivation: streams for (seed, purpose, index, sub)
// are fixed regardless of how many other streams exist or in which order
// they are drawn from. This is what makes multi-threaded runs bit-identical
// to single-threaded ones.
inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (0x9E3779B97F4A7C15ULL + b + (a << 6) + (a >> 2));
  return splitmix64(s);
}

enum class StreamTag : std::uint64_t {
  simulate = 1,
  evaluation = 2,
  gram = 3,
  bridge = 4,
  likelihood = 5,
  replicate = 6,
  probe = 7,
  codebook = 8,
};

inline std::uint64_t stream_key(std::uint64_t seed, StreamTag tag,
                                std::uint64_t index = 0,
                                std::uint64_t sub = 0) {
  return mix_key(mix_key(mix_key(seed, static_cast<std::uint64_t>(tag)), index), sub);
}

// xoshiro256++ with SplitMix64 seeding. Normals via Box-Muller with the
// second value of each pair cached, so a stream's output depends only on
// its key and the number of draws taken from it.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) {
    std::uint64_t s = key;
    for (auto& word : s_) word = splitmix64(s);
    has_cached_ = false;
    cached_ = 0.0;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double cached_;
  bool has_cached_;
};

}  // namespace sdeproj
