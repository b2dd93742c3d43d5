#include "boolnet/math_util.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace boolnet {

namespace {

// Cumulative ln k! table, built lazily on first use. ~800 KB, shared.
const std::vector<double>& exact_log_factorial_table() {
  static std::vector<double> table = [] {
    std::vector<double> t(kExactLogFactorialLimit + 1);
    t[0] = 0.0;
    KahanSum acc;
    for (std::uint64_t k = 1; k <= kExactLogFactorialLimit; ++k) {
      acc.add(std::log(static_cast<double>(k)));
      t[k] = acc.value();
    }
    return t;
  }();
  return table;
}

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // ln(2*pi)/2

}  // namespace

double log_factorial(std::uint64_t n) {
  if (n <= kExactLogFactorialLimit) {
    return exact_log_factorial_table()[n];
  }
  double x = static_cast<double>(n);
  return x * std::log(x) - x + 0.5 * std::log(x) + kHalfLogTwoPi +
         1.0 / (12.0 * x);
}

double log_binomial_coefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("log_binomial_coefficient: k > n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double unit_ball_volume(int dim) {
  if (dim < 1) throw std::invalid_argument("unit_ball_volume: dim < 1");
  double d = static_cast<double>(dim);
  return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad args");
  if (x == 0.0) return 1.0;
  const double log_gamma_a = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, Q = 1 - P.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    double p = sum * std::exp(-x + a * std::log(x) - log_gamma_a);
    return 1.0 - p;
  }
  // Lentz continued fraction for Q(a,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma_a);
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace boolnet
