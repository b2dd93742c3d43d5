#include "boolnet/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "boolnet/math_util.hpp"

namespace boolnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lambda * eta(A) as an exact count; throws when not integral.
std::uint64_t count_of(double mass, double lambda) {
  const double scaled = mass * lambda;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, std::abs(scaled)) ||
      rounded < 0.0) {
    throw std::invalid_argument(
        "poisson cell law: lambda * eta(A) must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(rounded);
}

double log_poisson_pmf(std::uint64_t k, double mean) {
  if (mean == 0.0) return k == 0 ? 0.0 : -kInf;
  return -mean + static_cast<double>(k) * std::log(mean) -
         log_factorial(k);
}

}  // namespace

CellLaw cell_law(const ScalingRegime& regime,
                 std::shared_ptr<const Partition> partition) {
  const BinnedMeasure ref = reference_measure(regime, partition);
  CellLaw law;
  law.partition = ref.partition_ptr();
  law.means.resize(ref.cells());
  for (std::size_t c = 0; c < ref.cells(); ++c) {
    law.means[c] = regime.lambda() * ref[c];
  }
  return law;
}

double poisson_cell_log_prob(const BinnedMeasure& eta, const CellLaw& law,
                             double lambda) {
  if (!eta.partition().same_grid(*law.partition)) {
    throw std::invalid_argument("poisson_cell_log_prob: partition mismatch");
  }
  KahanSum sum;
  for (std::size_t c = 0; c < eta.cells(); ++c) {
    const std::uint64_t k = count_of(eta[c], lambda);
    const double lp = log_poisson_pmf(k, law.means[c]);
    if (lp == -kInf) return -kInf;
    sum.add(lp);
  }
  return sum.value();
}

std::pair<double, double> sandwich_bounds(const BinnedMeasure& eta,
                                          const CellLaw& law, double lambda,
                                          double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("sandwich_bounds: epsilon < 0");
  if (!eta.partition().same_grid(*law.partition)) {
    throw std::invalid_argument("sandwich_bounds: partition mismatch");
  }
  for (double m : law.means) {
    if (epsilon > 0.0 && epsilon >= m) {
      throw std::invalid_argument("sandwich_bounds: epsilon >= smallest cell mean");
    }
  }
  KahanSum lower, upper;
  for (std::size_t c = 0; c < eta.cells(); ++c) {
    const std::uint64_t k = count_of(eta[c], lambda);
    const double m = law.means[c];
    const double lf = log_factorial(k);
    const double kd = static_cast<double>(k);
    double lo, hi;
    if (k == 0) {
      lo = -(m + epsilon) - lf;
      hi = -(m - epsilon) - lf;
    } else {
      if (m - epsilon <= 0.0) return {-kInf, kInf};
      lo = -(m + epsilon) + kd * std::log(m - epsilon) - lf;
      hi = -(m - epsilon) + kd * std::log(m + epsilon) - lf;
    }
    lower.add(lo);
    upper.add(hi);
  }
  return {lower.value(), upper.value()};
}

double binomial_edge_pmf(std::uint64_t k, std::uint64_t n_pairs, double p) {
  if (k > n_pairs) throw std::invalid_argument("binomial_edge_pmf: k > n_pairs");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial_edge_pmf: p outside [0, 1]");
  }
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n_pairs ? 1.0 : 0.0;
  const double log_pmf = log_binomial_coefficient(n_pairs, k) +
                         static_cast<double>(k) * std::log(p) +
                         static_cast<double>(n_pairs - k) * std::log1p(-p);
  return std::exp(log_pmf);
}

double poisson_tail(double mean, std::int64_t threshold) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson_tail: bad mean");
  }
  if (threshold < 0) return 1.0;
  if (mean == 0.0) return 0.0;

  if (static_cast<double>(threshold) < mean) {
    // Head is the smaller piece only in the far left tail; direct
    // complement is stable here because the head sum stays well below 1.
    KahanSum head;
    double term = std::exp(-mean);  // pmf(0); mean <= ~700 keeps this normal
    if (term == 0.0) {
      // Underflow guard for very large means: log-space head summation.
      KahanSum h;
      for (std::int64_t k = 0; k <= threshold; ++k) {
        h.add(std::exp(log_poisson_pmf(static_cast<std::uint64_t>(k), mean)));
      }
      return 1.0 - h.value();
    }
    for (std::int64_t k = 0;; ++k) {
      head.add(term);
      if (k == threshold) break;
      term *= mean / static_cast<double>(k + 1);
    }
    return 1.0 - head.value();
  }

  // Right tail: sum pmf upward from threshold + 1 until negligible.
  const std::uint64_t start = static_cast<std::uint64_t>(threshold) + 1;
  double term = std::exp(log_poisson_pmf(start, mean));
  KahanSum tail;
  std::uint64_t k = start;
  while (term > 0.0) {
    tail.add(term);
    ++k;
    term *= mean / static_cast<double>(k);
    if (term < tail.value() * 1e-18 && static_cast<double>(k) > mean) break;
  }
  return tail.value();
}

double bennett_tail_bound(double lambda, double a) {
  if (!(lambda >= 0.0) || !(a > 0.0)) {
    throw std::invalid_argument("bennett_tail_bound: bad arguments");
  }
  const double phi = (1.0 + a) * std::log1p(a) - a;
  return std::exp(-(lambda / (a * a)) * phi);
}

}  // namespace boolnet
