#include "boolnet/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "boolnet/math_util.hpp"

namespace boolnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_partition(const Partition& a, const Partition& b,
                            const char* where) {
  if (!a.same_grid(b)) {
    throw std::invalid_argument(std::string(where) + ": partition mismatch");
  }
}

void require_pair_function(const PairFunction& g, std::size_t cells,
                           const char* where) {
  if (g.size() != cells * cells) {
    throw std::invalid_argument(std::string(where) + ": pair function size mismatch");
  }
  for (std::size_t a = 0; a < cells; ++a) {
    for (std::size_t b = 0; b < cells; ++b) {
      const double v = g[a * cells + b];
      if (!std::isfinite(v) || std::abs(v) > 700.0) {
        throw std::domain_error(std::string(where) + ": |g| > 700 would overflow e^g");
      }
      if (v != g[b * cells + a]) {
        throw std::invalid_argument(std::string(where) + ": g must be symmetric");
      }
    }
  }
}

// x log(x/k) + k - x, the per-entry Cramer/Poisson integrand; >= 0, zero at
// x = k, +inf when k = 0 < x.
double poisson_bregman(double x, double k) {
  if (x < 0.0) throw std::invalid_argument("rate: negative mass");
  if (x == 0.0) return k;
  if (k == 0.0) return kInf;
  return x * std::log(x / k) + k - x;
}

}  // namespace

double relative_entropy(const BinnedMeasure& p, const BinnedMeasure& q) {
  require_same_partition(p.partition(), q.partition(), "relative_entropy");
  KahanSum sum;
  for (std::size_t c = 0; c < p.cells(); ++c) {
    const double pc = p[c], qc = q[c];
    if (pc < 0.0 || qc < 0.0) {
      throw std::invalid_argument("relative_entropy: negative masses");
    }
    if (pc == 0.0) continue;
    if (qc == 0.0) return kInf;
    sum.add(pc * std::log(pc / qc));
  }
  return sum.value();
}

RateValue mark_rate(const BinnedMeasure& omega, const BinnedMeasure& ref) {
  RateValue out;
  if (std::abs(omega.total_mass() - 1.0) > kMassTolerance) {
    out.value = kInf;
    return out;
  }
  out.value = relative_entropy(omega, ref);
  return out;
}

BinnedPairMeasure pair_reference(const BinnedMeasure& omega,
                                 const ScalingRegime& regime,
                                 int kernel_subdivisions) {
  const auto psi =
      cell_kernel_matrix(regime, omega.partition(), kernel_subdivisions);
  const std::size_t n = omega.cells();
  std::vector<double> mass(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      mass[a * n + b] = psi[a * n + b] * omega[a] * omega[b];
    }
  }
  return BinnedPairMeasure(omega.partition_ptr(), std::move(mass));
}

namespace {

// Shared core of conditional_rate: (1/2) sum over ordered pairs of
// pi ln(pi/K) + K - pi, with the entropy support convention.
RateValue conditional_rate_against(const BinnedPairMeasure& pi,
                                   const BinnedPairMeasure& k_ref) {
  RateValue out;
  RateDecomposition dec;
  dec.reference_pair_mass = k_ref.total_mass();
  dec.pair_mass = pi.total_mass();

  KahanSum entropy;
  bool infinite = false;
  const std::size_t n = pi.cells();
  for (std::size_t a = 0; a < n && !infinite; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double x = pi(a, b), k = k_ref(a, b);
      if (x == 0.0) continue;
      if (k == 0.0) {
        infinite = true;
        break;
      }
      entropy.add(x * std::log(x / k));
    }
  }
  if (infinite) {
    dec.pair_entropy = kInf;
    dec.conditional_term = kInf;
    out.value = kInf;
  } else {
    dec.pair_entropy = entropy.value();
    dec.conditional_term =
        0.5 * (dec.pair_entropy + dec.reference_pair_mass - dec.pair_mass);
    out.value = dec.conditional_term;
  }
  out.decomposition = dec;
  return out;
}

}  // namespace

RateValue conditional_rate(const BinnedPairMeasure& pi, const BinnedMeasure& omega,
                           const ScalingRegime& regime, int kernel_subdivisions) {
  require_same_partition(pi.partition(), omega.partition(), "conditional_rate");
  if (!pi.is_symmetric()) {
    throw std::invalid_argument("conditional_rate: pi must be symmetric");
  }
  return conditional_rate_against(pi, pair_reference(omega, regime, kernel_subdivisions));
}

RateValue joint_rate(const BinnedMeasure& omega, const BinnedPairMeasure& pi,
                     const BinnedMeasure& ref, const ScalingRegime& regime,
                     int kernel_subdivisions) {
  RateValue mark = mark_rate(omega, ref);
  RateValue cond = conditional_rate(pi, omega, regime, kernel_subdivisions);
  RateValue out;
  RateDecomposition dec =
      cond.decomposition.value_or(RateDecomposition{});
  dec.mark_term = mark.value;
  out.decomposition = dec;
  out.value = mark.value + dec.conditional_term;
  return out;
}

double log_mgf_limit(const PairFunction& g, const BinnedMeasure& omega,
                     const ScalingRegime& regime, int kernel_subdivisions) {
  const auto k_ref = pair_reference(omega, regime, kernel_subdivisions);
  const std::size_t n = omega.cells();
  require_pair_function(g, n, "log_mgf_limit");
  KahanSum sum;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      sum.add((1.0 - std::exp(g[a * n + b])) * k_ref(a, b));
    }
  }
  return -0.5 * sum.value();
}

double finite_lambda_log_mgf(const PairFunction& g, const BinnedMeasure& omega,
                             const ScalingRegime& regime, double lambda,
                             int kernel_subdivisions) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("finite_lambda_log_mgf: lambda must be > 0");
  }
  const std::size_t n = omega.cells();
  require_pair_function(g, n, "finite_lambda_log_mgf");
  const auto psi =
      cell_kernel_matrix(regime, omega.partition(), kernel_subdivisions);
  const double scale = std::pow(lambda, regime.scale_exponents().pair_exponent());
  KahanSum sum;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double p = -std::expm1(-psi[a * n + b] * scale);
      const double arg = 1.0 - p * (1.0 - std::exp(g[a * n + b]));
      if (arg <= 0.0) {
        throw std::domain_error("finite_lambda_log_mgf: log of nonpositive argument");
      }
      sum.add(omega[a] * omega[b] * std::log(arg));
    }
  }
  return 0.5 * lambda * lambda * sum.value();
}

RateValue legendre_conditional_rate(const BinnedPairMeasure& pi,
                                    const BinnedMeasure& omega,
                                    const ScalingRegime& regime,
                                    int kernel_subdivisions) {
  require_same_partition(pi.partition(), omega.partition(),
                         "legendre_conditional_rate");
  if (!pi.is_symmetric()) {
    throw std::invalid_argument("legendre_conditional_rate: pi must be symmetric");
  }
  const auto k_ref = pair_reference(omega, regime, kernel_subdivisions);
  const std::size_t n = pi.cells();

  // The objective splits over ordered pairs as
  //   f(g) = (1/2) [ g pi + (1 - e^g) K ],   f'(g) = (1/2) [ pi - K e^g ].
  // f is strictly concave in g whenever K > 0.
  constexpr double kGMin = -46.0;  // e^{-46} ~ 1e-20, below any tolerance
  KahanSum total;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double x = pi(a, b), k = k_ref(a, b);
      if (k == 0.0) {
        if (x > 0.0) {
          RateValue out;
          out.value = kInf;
          return out;
        }
        continue;  // x = 0 too: sup_g contribution is 0 at g = 0
      }
      if (x == 0.0) {
        // Supremum approached as g -> -inf; value (1/2) K.
        total.add(0.5 * (1.0 - std::exp(kGMin)) * k);
        continue;
      }
      double g = 0.0;
      bool converged = false;
      for (int it = 0; it < 200; ++it) {
        const double keg = k * std::exp(g);
        const double grad = 0.5 * (x - keg);
        if (std::abs(grad) <= 1e-14 * std::max(x, k)) {
          converged = true;
          break;
        }
        double step = grad / (0.5 * keg);  // Newton on the concave objective
        step = std::clamp(step, -20.0, 20.0);
        g = std::clamp(g + step, kGMin, 700.0);
      }
      if (!converged) {
        throw std::runtime_error("legendre_conditional_rate: ascent did not converge");
      }
      total.add(0.5 * (g * x + (1.0 - std::exp(g)) * k));
    }
  }
  RateValue out;
  out.value = total.value();
  return out;
}

RateValue infimize_rate(const EventConstraint& constraint, const BinnedMeasure& ref,
                        const ScalingRegime& regime, int kernel_subdivisions) {
  RateValue out;
  if (const auto* mc = std::get_if<MarkCellConstraint>(&constraint)) {
    if (mc->cell >= ref.cells() || mc->threshold < 0.0) {
      throw std::invalid_argument("infimize_rate: bad mark constraint");
    }
    // Off-constraint cells sit at the reference, contributing zero; the
    // constrained cell moves to max(threshold, mean).
    const double m = ref[mc->cell];
    out.value = mc->threshold <= m ? 0.0 : poisson_bregman(mc->threshold, m);
    return out;
  }

  const auto k_ref = pair_reference(ref, regime, kernel_subdivisions);
  if (const auto* pc = std::get_if<PairCellConstraint>(&constraint)) {
    if (pc->cell_a >= ref.cells() || pc->cell_b >= ref.cells() ||
        pc->threshold < 0.0) {
      throw std::invalid_argument("infimize_rate: bad pair constraint");
    }
    const double k = k_ref(pc->cell_a, pc->cell_b);
    const double c = pc->threshold;
    if (c <= k) {
      out.value = 0.0;
    } else if (pc->cell_a == pc->cell_b) {
      out.value = 0.5 * poisson_bregman(c, k);
    } else {
      // Symmetry moves both ordered entries together.
      out.value = poisson_bregman(c, k);
    }
    return out;
  }

  const auto& pt = std::get<PairTotalConstraint>(constraint);
  if (pt.threshold < 0.0) {
    throw std::invalid_argument("infimize_rate: bad total-mass constraint");
  }
  const double k_total = k_ref.total_mass();
  // The optimal pi is proportional to K, scaled to the constraint mass.
  out.value = pt.threshold <= k_total
                  ? 0.0
                  : 0.5 * poisson_bregman(pt.threshold, k_total);
  return out;
}

}  // namespace boolnet
