// Shared statistical helpers for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "boolnet/math_util.hpp"

namespace boolnet::testing {

// Chi-square goodness-of-fit p-value. Bins with expected count below
// `min_expected` are pooled into their left neighbor.
inline double chi_square_p_value(const std::vector<double>& observed,
                                 const std::vector<double>& expected,
                                 double min_expected = 5.0) {
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 && !exp.empty()) {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  if (exp.size() < 2) return 1.0;
  double stat = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double d = obs[i] - exp[i];
    stat += d * d / exp[i];
  }
  const double df = static_cast<double>(exp.size()) - 1.0;
  return gamma_q(df / 2.0, stat / 2.0);
}

// Kolmogorov-Smirnov statistic of samples against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace boolnet::testing
