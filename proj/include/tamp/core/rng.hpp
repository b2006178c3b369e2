#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tamp {

// Seeded RNG with hand-rolled variate transforms. std::uniform_real_distribution
// and friends are implementation-defined, so every stochastic component in the
// toolkit draws through this wrapper to keep replays bit-identical.
class Rng {
public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  // Deterministically derive an independent stream, e.g. per trial or per K.
  Rng fork(uint64_t stream) const {
    uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    return Rng(x);
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t uniform_index(uint64_t n) {
    return n == 0 ? 0 : engine_() % n;
  }

  // Standard normal via Box-Muller (no cached spare, to keep state trivial).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace tamp
