#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace ipcw {

//! splitmix64 mixing step; also used to derive per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

//! xoshiro256** generator with fully specified uniform and normal
//! transforms, so identical seeds give identical draws on every platform
//! (the standard library distributions are implementation-defined).
//!
//! Stream scheme: replication r of a study with base seed s uses
//! Rng(stream_seed(s, r)); results are therefore independent of the
//! execution order and of the number of worker threads.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  //! Seed for replication/stream `index` under base seed `base`.
  static std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t sm = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    return splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  //! Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  //! Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  //! Standard normal via the Marsaglia polar method (pair cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ipcw
