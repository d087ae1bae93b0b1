#pragma once

#include <cstdint>
#include <string_view>

// Counter-based splittable random number generation.
//
// Every random quantity in this project is produced by a small stateless
// generator keyed by a chain of 64-bit words (master seed, experiment id,
// trial index, entry coordinates, ...).  Draws depend only on the key and a
// local counter, so a matrix entry gets the same bits no matter which worker
// fills it or in which order.

namespace specrad::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h + kGolden + v);
}

// FNV-1a, used to fold experiment ids into the key chain.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// One stream of the counter-based construction: output i is
// mix64(key + i*golden), i.e. SplitMix64 seeded at `key`.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ + kGolden * counter_++); }

  // Uniform on the open interval (0,1); never returns an endpoint, so
  // logs and inverse CDFs are safe.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Key chains used by the sampler and harness.
inline std::uint64_t trial_key(std::uint64_t master_seed,
                               std::string_view experiment_id,
                               std::uint64_t trial_index) {
  std::uint64_t h = mix64(master_seed);
  h = hash_combine(h, fnv1a(experiment_id));
  h = hash_combine(h, trial_index);
  return h;
}

inline std::uint64_t entry_key(std::uint64_t trial_key_value, int i, int j) {
  return hash_combine(trial_key_value, (static_cast<std::uint64_t>(
                                            static_cast<std::uint32_t>(i))
                                        << 32) |
                                           static_cast<std::uint32_t>(j));
}

}  // namespace specrad::rng
