#include "boolnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boolnet/math_util.hpp"

namespace boolnet {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull);
  std::uint64_t a = splitmix64_next(s);
  std::uint64_t b = splitmix64_next(s);
  return a ^ (b >> 1);
}

std::uint64_t Rng::poisson_small(double mean) {
  // Knuth multiplication method; mean must be small enough that
  // exp(-mean) does not underflow (chunked by the caller).
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double product = uniform();
  while (product > limit) {
    ++k;
    product *= uniform();
  }
  return k;
}

std::uint64_t Rng::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::invalid_argument("Rng::poisson: mean must be finite and >= 0");
  }
  constexpr double kChunk = 500.0;
  std::uint64_t total = 0;
  while (mean > kChunk) {
    total += poisson_small(kChunk);
    mean -= kChunk;
  }
  if (mean > 0.0) total += poisson_small(mean);
  return total;
}

DiscreteDistribution::DiscreteDistribution(std::int64_t lo,
                                           const std::vector<double>& pmf)
    : lo_(lo) {
  const std::size_t n = pmf.size();
  prob_.assign(n, 1.0);
  alias_.resize(n);
  for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::int64_t>(i);
  if (n == 1) return;

  KahanSum total;
  for (double p : pmf) total.add(p);
  const double scale = static_cast<double>(n) / total.value();

  // Vose worklists over scaled masses.
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = pmf[i] * scale;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    const std::size_t l = large.back();
    small.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = static_cast<std::int64_t>(l);
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are numerically full slots.
  for (std::size_t s : small) prob_[s] = 1.0;
  for (std::size_t l : large) prob_[l] = 1.0;
}

DiscreteDistribution DiscreteDistribution::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::invalid_argument("DiscreteDistribution::poisson: bad mean");
  }
  if (mean == 0.0) {
    return DiscreteDistribution(0, std::vector<double>{1.0});
  }
  const double log_mean = std::log(mean);
  const double sigma = std::sqrt(mean);
  const auto cap = static_cast<std::int64_t>(mean + 60.0 * sigma) + 64;
  std::vector<double> pmf;
  pmf.reserve(static_cast<std::size_t>(cap) + 1);
  for (std::int64_t k = 0; k <= cap; ++k) {
    pmf.push_back(std::exp(-mean + static_cast<double>(k) * log_mean -
                           log_factorial(static_cast<std::uint64_t>(k))));
  }
  return DiscreteDistribution(0, pmf);
}

DiscreteDistribution DiscreteDistribution::binomial(std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("DiscreteDistribution::binomial: bad p");
  }
  if (n == 0 || p == 0.0) {
    return DiscreteDistribution(0, std::vector<double>{1.0});
  }
  if (p == 1.0) {
    return DiscreteDistribution(static_cast<std::int64_t>(n),
                                std::vector<double>{1.0});
  }
  const double logp = std::log(p);
  const double log1mp = std::log1p(-p);
  const double mean = static_cast<double>(n) * p;
  const double sigma = std::sqrt(mean * (1.0 - p));
  const std::uint64_t cap = std::min<std::uint64_t>(
      n, static_cast<std::uint64_t>(mean + 60.0 * sigma) + 64);
  std::vector<double> pmf;
  pmf.reserve(cap + 1);
  for (std::uint64_t k = 0; k <= cap; ++k) {
    pmf.push_back(std::exp(log_binomial_coefficient(n, k) +
                           static_cast<double>(k) * logp +
                           static_cast<double>(n - k) * log1mp));
  }
  return DiscreteDistribution(0, pmf);
}

}  // namespace boolnet
