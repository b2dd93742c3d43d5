#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "boolnet/math_util.hpp"

using namespace boolnet;

TEST_SUITE_BEGIN("math_util");

TEST_CASE("binomial coefficients") {
  CHECK(log_binomial_coefficient(10, 5) == doctest::Approx(std::log(252.0)));
  CHECK(log_binomial_coefficient(10, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(log_binomial_coefficient(3, 4), std::invalid_argument);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 / 3.0 * M_PI));
}

TEST_CASE("regularized incomplete gamma") {
  // Q(1, x) = e^{-x}.
  CHECK(gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  // Chi-square with 2 dof: P(X > x) = e^{-x/2}.
  CHECK(gamma_q(1.0, 0.0) == 1.0);
  // Q(a, x) is decreasing in x.
  CHECK(gamma_q(5.0, 2.0) > gamma_q(5.0, 8.0));
  // Against the Poisson cdf identity: Q(k+1, m) = P(Poisson(m) <= k).
  double cdf = 0.0;
  for (int k = 0; k <= 7; ++k) {
    cdf += std::exp(-5.0 + k * std::log(5.0) - log_factorial(k));
  }
  CHECK(gamma_q(8.0, 5.0) == doctest::Approx(cdf).epsilon(1e-10));
}

TEST_CASE("kahan summation keeps small terms") {
  KahanSum sum;
  sum.add(1.0);
  for (int i = 0; i < 10000000; ++i) sum.add(1e-16);
  CHECK(sum.value() == doctest::Approx(1.0 + 1e-9).epsilon(1e-10));
}

TEST_CASE("fnv digest is stable") {
  CHECK(fnv1a64(std::string("")) == 0xcbf29ce484222325ull);
  CHECK(fnv1a64(std::string("a")) != fnv1a64(std::string("b")));
}

TEST_SUITE_END();
