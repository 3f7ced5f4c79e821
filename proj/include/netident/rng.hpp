#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace netident {

// splitmix64 step; used both as a generator and as a seed mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed derivation. Replication streams are derived from
// (master_seed, tag, n, T, rep, ...) so grid cells and replications are
// independent of each other and of execution order.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t p : parts) {
    state ^= p + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    (void)splitmix64(state);
  }
  return splitmix64(state);
}

// Small self-contained generator (xoshiro-free: splitmix64 core) with an
// explicit Box-Muller normal, so streams are reproducible independent of
// the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed), cache_valid_(false) {
    // warm up so nearby seeds decorrelate
    (void)splitmix64(state_);
    (void)splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, bound)
  std::uint64_t uniform_below(std::uint64_t bound) {
    // modulo bias is negligible for the bounds used here (n <= a few hundred)
    return next_u64() % bound;
  }

  // standard normal via Box-Muller
  double normal() {
    if (cache_valid_) {
      cache_valid_ = false;
      return cache_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cache_ = r * std::sin(a);
    cache_valid_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double cache_;
  bool cache_valid_;
};

}  // namespace netident
