#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "permsum/errors.hpp"

namespace permsum {

// Reproducibility contract: all randomness comes from xoshiro256++ 1.0
// (Blackman & Vigna) seeded through splitmix64 (Steele, Lea & Vigna), both
// with the published reference constants. Streams are pure 64-bit integer
// arithmetic, so a fixed seed yields the same draws on every platform.

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() { return splitmix64_mix(state += 0x9E3779B97F4A7C15ull); }
};

/// i-th element of the splitmix64 stream seeded with `master`. Used to derive
/// independent sub-seeds for sample blocks: workers always see the same
/// sub-seed for a given block index, whatever the thread count.
inline std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Unbiased draw from [0, n) by rejecting the top band (draws at most a
  /// variable number of words; the sequence is still seed-deterministic).
  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t threshold = (-n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 4> state_;
};

/// In-place partial Fisher-Yates: after the call the first k slots hold a
/// uniform ordered k-sample without replacement. Slot i is swapped with a
/// uniform slot at or after it.
template <class T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Xoshiro256pp& rng) {
  std::size_t n = items.size();
  for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
    std::swap(items[i], items[j]);
  }
}

/// Uniform permutation of {0, ..., n-1}.
inline std::vector<std::int32_t> sample_permutation(std::size_t n, Xoshiro256pp& rng) {
  if (n < 1) throw precondition_error("permutation size must be >= 1");
  std::vector<std::int32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  partial_shuffle(perm, n, rng);
  return perm;
}

}  // namespace permsum
