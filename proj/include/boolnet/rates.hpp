// Relative entropies and the rate functions of the large-deviation limits:
// the mark rate I1, the conditional pair rate I_omega (closed form and
// Legendre/variational route), the joint rate, limiting log-MGFs, and
// constrained infima for half-space events.
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "boolnet/measures.hpp"
#include "boolnet/model.hpp"

namespace boolnet {

struct RateDecomposition {
  double mark_term = 0.0;         // H(omega || ref), or +inf
  double conditional_term = 0.0;  // I_omega(pi), or +inf
  double pair_entropy = 0.0;      // H(pi || Psi omega (x) omega)
  double reference_pair_mass = 0.0;
  double pair_mass = 0.0;
};

struct RateValue {
  double value = 0.0;  // >= 0, possibly +inf
  std::optional<RateDecomposition> decomposition;
};

// Sum p log(p/q) with 0 log(0/q) = 0; +inf when p(a) > 0 while q(a) = 0.
// Natural logarithm throughout.
double relative_entropy(const BinnedMeasure& p, const BinnedMeasure& q);

// I1(omega): H(omega || ref) when ||omega|| = 1 (tolerance 1e-9), else +inf.
RateValue mark_rate(const BinnedMeasure& omega, const BinnedMeasure& ref);

// Mass-gate tolerance for mark_rate.
inline constexpr double kMassTolerance = 1e-9;

// K(a, b) = Psi_bar(a, b) * omega(a) * omega(b) on omega's partition.
BinnedPairMeasure pair_reference(const BinnedMeasure& omega,
                                 const ScalingRegime& regime,
                                 int kernel_subdivisions = 1);

// I_omega(pi) = (1/2) [ H(pi || K) + ||K|| - ||pi|| ], K = pair_reference.
// Throws for asymmetric pi.
RateValue conditional_rate(const BinnedPairMeasure& pi, const BinnedMeasure& omega,
                           const ScalingRegime& regime,
                           int kernel_subdivisions = 1);

// Joint rate: mark_rate + conditional_rate, with both addends reported.
RateValue joint_rate(const BinnedMeasure& omega, const BinnedPairMeasure& pi,
                     const BinnedMeasure& ref, const ScalingRegime& regime,
                     int kernel_subdivisions = 1);

// Symmetric bounded test function on ordered cell pairs, dense row-major.
using PairFunction = std::vector<double>;

// Phi(g) = -(1/2) sum_{a,b} (1 - e^{g(a,b)}) K(a,b). Rejects |g| > 700.
double log_mgf_limit(const PairFunction& g, const BinnedMeasure& omega,
                     const ScalingRegime& regime, int kernel_subdivisions = 1);

// log Phi_lambda(g) = (lambda^2/2) sum_{a,b} omega(a) omega(b)
//   * log(1 - p_lambda(a,b) (1 - e^{g(a,b)})), with p_lambda from the
// finite-lambda connection probability at cell midpoints.
double finite_lambda_log_mgf(const PairFunction& g, const BinnedMeasure& omega,
                             const ScalingRegime& regime, double lambda,
                             int kernel_subdivisions = 1);

// Variational route to I_omega: sup_g { (1/2) <g, pi> - Phi(g) }, maximized
// per ordered pair by safeguarded Newton ascent. The pairing carries the
// same 1/2 as Phi because each edge charges both ordered pairs; the per-pair
// stationary point is g*(a,b) = log(pi/K), which reproduces the closed form.
RateValue legendre_conditional_rate(const BinnedPairMeasure& pi,
                                    const BinnedMeasure& omega,
                                    const ScalingRegime& regime,
                                    int kernel_subdivisions = 1);

// Half-space events for rate infima.
struct MarkCellConstraint {
  std::size_t cell = 0;
  double threshold = 0.0;  // { eta(cell) >= threshold }
};
struct PairCellConstraint {
  std::size_t cell_a = 0, cell_b = 0;
  double threshold = 0.0;  // { pi(a, b) >= threshold }
};
struct PairTotalConstraint {
  double threshold = 0.0;  // { ||pi|| >= threshold }
};
using EventConstraint =
    std::variant<MarkCellConstraint, PairCellConstraint, PairTotalConstraint>;

// Infimum of the relevant rate over the constraint half-space. Mark events
// minimize the unnormalized mark rate H(eta||ref) + ||ref|| - ||eta|| over
// the cone {eta >= 0}, giving the Cramer value m - c + c log(c/m) for a
// one-cell event with mean m < c. Pair events minimize I_omega at
// omega = ref; both rates are separable, so the minimization is exact.
RateValue infimize_rate(const EventConstraint& constraint, const BinnedMeasure& ref,
                        const ScalingRegime& regime, int kernel_subdivisions = 1);

}  // namespace boolnet
