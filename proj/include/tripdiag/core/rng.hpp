// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded randomness whose output depends only on the mt19937_64 sequence.
// The standard distributions and std::shuffle differ between library
// implementations, so generated data would not be reproducible with them.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tripdiag {

/// Uniform integer in [0, n) by rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

/// Fisher-Yates over uniform_below.
template <class T>
void portable_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_below(rng, i))]);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_below(engine_, static_cast<std::uint64_t>(hi - lo) + 1));
  }
  int between(int lo, int hi) { return static_cast<int>(between(std::int64_t{lo}, std::int64_t{hi})); }
  bool chance(int percent) { return between(1, 100) <= percent; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_below(engine_, n)); }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }
  template <class T>
  void shuffle(std::vector<T>& v) {
    portable_shuffle(v, engine_);
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
};

}  // namespace tripdiag
