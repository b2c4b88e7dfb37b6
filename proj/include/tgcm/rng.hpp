#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace tgcm {

// Deterministic RNG. std::mt19937_64 output is pinned by the standard; every
// distribution transform is hand-rolled here so that identical seeds give
// identical streams on any compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of randomness.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). Fixed-point multiply, no rejection loop.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  int next_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(next_below(
                    static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
  }

  // Fisher-Yates, back to front.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // First k elements of a shuffled copy; order of the sample is the draw order.
  template <typename T>
  std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t k) {
    if (k > pool.size()) k = pool.size();
    std::vector<T> out;
    out.reserve(k);
    std::size_t remaining = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = static_cast<std::size_t>(next_below(remaining));
      out.push_back(pool[j]);
      pool[j] = pool[remaining - 1];
      --remaining;
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

// Stable seed mixing (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tgcm
