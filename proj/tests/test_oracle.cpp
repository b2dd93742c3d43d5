#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "boolnet/math_util.hpp"
#include "boolnet/oracle.hpp"
#include "boolnet/rng.hpp"

using namespace boolnet;

TEST_SUITE_BEGIN("oracle");

namespace {

const Domain kDom = Domain::box(3, 1.0);

ScalingRegime uniform_regime(double lambda) {
  return ScalingRegime(lambda, kDom, MarkLaw::uniform(0.0, 0.2), ConstantKernel{1.0});
}

std::shared_ptr<Partition> split_partition(double split) {
  return std::make_shared<Partition>(
      kDom, std::vector<std::vector<double>>{{0.0, split, 1.0}, {0.0, 1.0}, {0.0, 1.0}},
      std::vector<double>{0.0, 0.2});
}

BinnedMeasure eta_of(std::shared_ptr<const Partition> part,
                     std::vector<double> masses) {
  return BinnedMeasure(std::move(part), std::move(masses));
}

}  // namespace

TEST_CASE("log factorial agrees with lgamma on both regimes") {
  for (std::uint64_t n : {0ull, 1ull, 5ull, 100ull, 99999ull, 100001ull, 250000ull}) {
    CHECK(log_factorial(n) ==
          doctest::Approx(std::lgamma(static_cast<double>(n) + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("poisson cell log probability") {
  const auto part = split_partition(0.5);
  const auto law = cell_law(uniform_regime(4.0), part);
  REQUIRE(law.means == std::vector<double>{2.0, 2.0});

  SUBCASE("empty counts give minus the total mean") {
    const auto eta = eta_of(part, {0.0, 0.0});
    CHECK(poisson_cell_log_prob(eta, law, 4.0) == doctest::Approx(-4.0));
  }
  SUBCASE("single-cell pmf value") {
    // P(N = 3 | mean 2) = e^{-2} 2^3 / 3! = 0.180447...
    const auto eta = eta_of(part, {3.0 / 4.0, 0.0});
    const double expected = std::log(std::exp(-2.0) * 8.0 / 6.0) - 2.0;
    CHECK(poisson_cell_log_prob(eta, law, 4.0) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("joint law decomposes over independent cells") {
    const auto eta = eta_of(part, {3.0 / 4.0, 1.0 / 4.0});
    auto marginal = [](std::uint64_t k, double mean) {
      return -mean + static_cast<double>(k) * std::log(mean) - log_factorial(k);
    };
    CHECK(poisson_cell_log_prob(eta, law, 4.0) ==
          doctest::Approx(marginal(3, 2.0) + marginal(1, 2.0)).epsilon(1e-12));
  }
  SUBCASE("non-integer counts throw") {
    const auto eta = eta_of(part, {0.1, 0.0});
    CHECK_THROWS_AS(poisson_cell_log_prob(eta, law, 4.0), std::invalid_argument);
  }
}

TEST_CASE("pmf normalization over an enumerable support") {
  const auto part = split_partition(0.4);
  const double lambda = 6.0;
  const auto law = cell_law(uniform_regime(lambda), part);
  KahanSum total;
  for (int a = 0; a < 60; ++a) {
    for (int b = 0; b < 60; ++b) {
      const auto eta = eta_of(part, {a / lambda, b / lambda});
      total.add(std::exp(poisson_cell_log_prob(eta, law, lambda)));
    }
  }
  CHECK(std::abs(total.value() - 1.0) < 1e-10);
}

TEST_CASE("monte carlo frequency matches the exact pmf at lambda 10") {
  const auto part = split_partition(0.5);
  const double lambda = 10.0;
  const auto regime = uniform_regime(lambda);
  const auto law = cell_law(regime, part);
  // Frequency of the exact outcome (5, 5).
  const int replicas = 1000000;
  std::uint64_t hits = 0;
  for (int r = 0; r < replicas; ++r) {
    Rng rng(derive_seed(8, r));
    if (rng.poisson(5.0) == 5 && rng.poisson(5.0) == 5) ++hits;
  }
  const auto eta = eta_of(part, {0.5, 0.5});
  const double p = std::exp(poisson_cell_log_prob(eta, law, lambda));
  const double freq = static_cast<double>(hits) / replicas;
  const double se = std::sqrt(p * (1.0 - p) / replicas);
  CHECK(std::abs(freq - p) < 3.0 * se);
}

TEST_CASE("sandwich bounds") {
  const auto part = split_partition(0.5);
  const auto law = cell_law(uniform_regime(4.0), part);
  const auto eta = eta_of(part, {3.0 / 4.0, 0.0});
  const double exact = poisson_cell_log_prob(eta, law, 4.0);
  SUBCASE("epsilon zero degenerates to the exact value") {
    const auto [lo, hi] = sandwich_bounds(eta, law, 4.0, 0.0);
    CHECK(lo == doctest::Approx(exact).epsilon(1e-12));
    CHECK(hi == doctest::Approx(exact).epsilon(1e-12));
  }
  SUBCASE("positive epsilon brackets the exact value") {
    const auto [lo, hi] = sandwich_bounds(eta, law, 4.0, 0.1);
    CHECK(lo < exact);
    CHECK(exact < hi);
    // Per-cell factors: lower uses ln(m - eps), upper ln(m + eps).
    const double expected_lo =
        -(2.0 + 0.1) + 3.0 * std::log(1.9) - log_factorial(3) - (2.0 + 0.1);
    CHECK(lo == doctest::Approx(expected_lo).epsilon(1e-12));
  }
  SUBCASE("monotone in epsilon") {
    const auto [lo1, hi1] = sandwich_bounds(eta, law, 4.0, 0.05);
    const auto [lo2, hi2] = sandwich_bounds(eta, law, 4.0, 0.2);
    CHECK(lo2 < lo1);
    CHECK(hi1 < hi2);
  }
  SUBCASE("epsilon at the smallest mean throws") {
    CHECK_THROWS_AS(sandwich_bounds(eta, law, 4.0, 2.0), std::invalid_argument);
  }
  SUBCASE("bounds bracket a monte carlo estimate at lambda 10") {
    const auto part10 = split_partition(0.5);
    const double lambda = 10.0;
    const auto law10 = cell_law(uniform_regime(lambda), part10);
    const auto eta10 = eta_of(part10, {0.5, 0.5});
    const int replicas = 200000;
    std::uint64_t hits = 0;
    for (int r = 0; r < replicas; ++r) {
      Rng rng(derive_seed(99, r));
      if (rng.poisson(5.0) == 5 && rng.poisson(5.0) == 5) ++hits;
    }
    const double log_freq = std::log(static_cast<double>(hits) / replicas);
    const auto [lo, hi] = sandwich_bounds(eta10, law10, lambda, 0.5);
    CHECK(lo < log_freq);
    CHECK(log_freq < hi);
  }
}

TEST_CASE("binomial pmf") {
  CHECK(binomial_edge_pmf(0, 10, 0.3) == doctest::Approx(std::pow(0.7, 10)));
  CHECK(binomial_edge_pmf(5, 10, 0.5) == doctest::Approx(0.24609375).epsilon(1e-12));
  KahanSum total;
  for (std::uint64_t k = 0; k <= 40; ++k) total.add(binomial_edge_pmf(k, 40, 0.37));
  CHECK(std::abs(total.value() - 1.0) < 1e-12);
  CHECK_THROWS_AS(binomial_edge_pmf(11, 10, 0.5), std::invalid_argument);
}

TEST_CASE("poisson tail") {
  CHECK(poisson_tail(2.0, -1) == 1.0);
  // P(N > 4 | mean 2) = 1 - e^{-2}(1 + 2 + 2 + 4/3 + 2/3).
  CHECK(poisson_tail(2.0, 4) ==
        doctest::Approx(1.0 - std::exp(-2.0) * 7.0).epsilon(1e-12));
  SUBCASE("far tails stay accurate") {
    // Against the regularized gamma identity P(N > t) = 1 - Q(t+1, mean)
    // ... P(N <= t) = Q(t+1, mean) in the upper-gamma convention.
    for (double mean : {5.0, 30.0, 160.0}) {
      for (std::int64_t t :
           {static_cast<std::int64_t>(mean), static_cast<std::int64_t>(2 * mean),
            static_cast<std::int64_t>(3 * mean)}) {
        const double direct = poisson_tail(mean, t);
        const double via_gamma = 1.0 - gamma_q(static_cast<double>(t + 1), mean);
        CHECK(direct == doctest::Approx(via_gamma).epsilon(1e-9));
      }
    }
  }
  SUBCASE("bennett bound dominates the exact tail") {
    for (double lambda : {5.0, 30.0, 100.0}) {
      const double tail = poisson_tail(lambda, static_cast<std::int64_t>(2 * lambda));
      CHECK(tail <= bennett_tail_bound(lambda, 1.0));
    }
  }
}

TEST_CASE("decay slope approaches the negative relative entropy") {
  // Fixed eta on two cells; reference masses (1/2, 1/2).
  const auto part = split_partition(0.5);
  const auto eta_masses = std::vector<double>{0.95, 0.05};
  const double entropy = 0.95 * std::log(0.95 / 0.5) + 0.05 * std::log(0.05 / 0.5);
  double previous_gap = 1e300;
  for (double lambda : {100.0, 1000.0, 10000.0}) {
    const auto law = cell_law(uniform_regime(lambda), part);
    const auto eta = eta_of(part, eta_masses);
    const double value = poisson_cell_log_prob(eta, law, lambda) / lambda;
    const double gap = std::abs(value + entropy);
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
  CHECK(previous_gap < 1e-3);
}

TEST_SUITE_END();
