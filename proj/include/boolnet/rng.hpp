// Reproducible random number generation. The engine is std::mt19937_64
// (its output sequence is pinned by the standard); all variate generation
// on top of it is implemented here so results are identical across
// standard libraries and platforms.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace boolnet {

// SplitMix64 step; also the basis for stream-seed derivation.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Deterministic mix of (master seed, stream index). Used so that replica i
// of a sweep gets the same generator state regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Exact Poisson draw via products of uniforms; O(mean) uniforms.
  // Means above the chunk size are split using Poisson additivity.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t poisson_small(double mean);

  std::mt19937_64 engine_;
};

// Alias-table sampler (Vose) for a fixed nonnegative-integer law built
// from its exact log-space pmf. O(1) per draw, two generator calls. The
// per-value probabilities are preserved to double rounding, so tail events
// far beyond any feasible replica budget remain honest.
class DiscreteDistribution {
 public:
  static DiscreteDistribution poisson(double mean);
  static DiscreteDistribution binomial(std::uint64_t n, double p);

  std::int64_t sample(Rng& rng) const {
    const std::uint64_t r = rng.next_u64();
    const auto slot = static_cast<std::size_t>(
        (static_cast<unsigned __int128>(r) * prob_.size()) >> 64);
    const double frac = rng.uniform();
    return lo_ + (frac < prob_[slot] ? static_cast<std::int64_t>(slot)
                                     : alias_[slot]);
  }

  std::int64_t min_value() const { return lo_; }
  std::int64_t max_value() const {
    return lo_ + static_cast<std::int64_t>(prob_.size()) - 1;
  }

 private:
  DiscreteDistribution(std::int64_t lo, const std::vector<double>& pmf);

  std::int64_t lo_ = 0;
  std::vector<double> prob_;        // acceptance threshold per slot
  std::vector<std::int64_t> alias_;  // fallback value offset per slot
};

}  // namespace boolnet
