#pragma once

#include <cstdint>
#include <random>

namespace dyadic {

// Seeded generator whose derived draws do not depend on the standard
// library's distribution implementations, so reports are reproducible
// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n; }

  bool bernoulli(double p) { return uniform() < p; }

  // Independent stream for trial `index` of a seeded run.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    Rng rng(0);
    rng.engine_.seed(seq);
    return rng;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dyadic
