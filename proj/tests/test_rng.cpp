#include <doctest.h>

#include <cmath>

#include "boolnet/math_util.hpp"
#include "boolnet/oracle.hpp"
#include "boolnet/rng.hpp"

using namespace boolnet;

TEST_SUITE_BEGIN("rng");

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(123, 45) == derive_seed(123, 45));
}

TEST_CASE("poisson sampler matches mean and variance") {
  Rng rng(42);
  const double mean = 37.5;
  const int n = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.poisson(mean));
    sum += x;
    sum_sq += x * x;
  }
  const double m = sum / n;
  const double v = sum_sq / n - m * m;
  CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / n));
  CHECK(std::abs(v - mean) < 0.1 * mean);
}

TEST_CASE("poisson splitting handles large means") {
  Rng rng(7);
  const double mean = 1234.5;  // forces chunked sampling
  double sum = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(mean));
  CHECK(std::abs(sum / n - mean) < 4.0 * std::sqrt(mean / n));
}

TEST_CASE("alias tables reproduce the exact laws") {
  SUBCASE("poisson table") {
    const double mean = 40.0;
    auto table = DiscreteDistribution::poisson(mean);
    Rng rng(2024);
    const int n = 200000;
    std::vector<double> hist(200, 0.0);
    for (int i = 0; i < n; ++i) {
      const auto k = table.sample(rng);
      if (k < 200) hist[static_cast<std::size_t>(k)] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
      const double p = std::exp(-mean + static_cast<double>(k) * std::log(mean) -
                                log_factorial(k));
      tv += std::abs(hist[k] / n - p);
    }
    CHECK(tv / 2.0 < 0.01);
    // The table must cover rare thresholds far into the tail.
    CHECK(table.max_value() >= 80);
    // Tail frequency at a ~1e-4 threshold stays within Monte Carlo noise.
    Rng rng2(77);
    const int m = 2000000;
    int tail_hits = 0;
    for (int i = 0; i < m; ++i) {
      if (table.sample(rng2) >= 64) ++tail_hits;
    }
    const double exact_tail = poisson_tail(mean, 63);
    const double se = std::sqrt(exact_tail * (1.0 - exact_tail) / m);
    CHECK(std::abs(static_cast<double>(tail_hits) / m - exact_tail) < 4.0 * se);
  }
  SUBCASE("binomial table") {
    auto table = DiscreteDistribution::binomial(1250, 0.02);
    Rng rng(11);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(table.sample(rng));
    CHECK(sum / n == doctest::Approx(25.0).epsilon(0.02));
  }
  SUBCASE("degenerate tables") {
    auto zero = DiscreteDistribution::poisson(0.0);
    Rng rng(1);
    CHECK(zero.sample(rng) == 0);
    auto all = DiscreteDistribution::binomial(5, 1.0);
    CHECK(all.sample(rng) == 5);
  }
}

TEST_CASE("uniform determinism") {
  Rng a(555), b(555);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_SUITE_END();
