#pragma once

#include <cmath>
#include <cstdint>

namespace smgof {

// splitmix64 mixing step. Used both for seeding the main generator and for
// deriving independent per-replication streams from (base seed, index).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream seed for replication `index` of a run keyed by `base`. Mixing the
// index before xoring keeps nearby indices far apart in seed space.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t s = index;
  std::uint64_t t = base ^ splitmix64_next(s);
  return splitmix64_next(t);
}

// Self-contained xoshiro256++ generator with Box-Muller normals and a Knuth
// Poisson sampler. The standard <random> distributions are not pinned by the
// standard, so paths would not be reproducible across library versions;
// everything here is fully specified.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform_pos();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * 3.14159265358979323846 * v;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  // Poisson draw. Knuth's product method below mean 30; larger means are
  // split using infinite divisibility, so the sampler stays exact.
  std::int64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean > 30.0) {
      const double half = mean / 2.0;
      return poisson(half) + poisson(mean - half);
    }
    const double limit = std::exp(-mean);
    std::int64_t count = -1;
    double prod = 1.0;
    do {
      prod *= uniform_pos();
      ++count;
    } while (prod > limit);
    return count;
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace smgof
