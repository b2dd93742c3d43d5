// Shared numerical helpers: log-factorials, binomial coefficients,
// d-ball volumes, and the regularized incomplete gamma function.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace boolnet {

// ln(n!). Exact cumulative summation below kExactLogFactorialLimit,
// Stirling with the 1/(12n) correction above it.
double log_factorial(std::uint64_t n);

inline constexpr std::uint64_t kExactLogFactorialLimit = 100000;

// ln C(n, k); 0 when k == 0 or k == n.
double log_binomial_coefficient(std::uint64_t n, std::uint64_t k);

// Volume of the unit ball in d dimensions, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int dim);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series for x < a + 1, continued fraction otherwise.
double gamma_q(double a, double x);

// Compensated (Kahan) accumulator for long sums of small terms.
class KahanSum {
 public:
  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// FNV-1a over bytes; used for config/content digests in output files.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace boolnet
