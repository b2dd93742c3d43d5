// Exact small-instance probability laws: product-Poisson cell counts with
// sandwich bounds, binomial edge counts, Poisson tails, and the Bennett
// tail bound. All computation is in log space.
#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "boolnet/measures.hpp"
#include "boolnet/model.hpp"
#include "boolnet/partition.hpp"

namespace boolnet {

// Per-cell Poisson means lambda * (mu (x) Q)(A_j).
struct CellLaw {
  std::shared_ptr<const Partition> partition;
  std::vector<double> means;
};

CellLaw cell_law(const ScalingRegime& regime,
                 std::shared_ptr<const Partition> partition);

// log P(L1 = eta) under the product-Poisson cell law; lambda * eta(A_j)
// must be integral (within 1e-9). eta carries masses counts / lambda.
double poisson_cell_log_prob(const BinnedMeasure& eta, const CellLaw& law,
                             double lambda);

// Log-probability sandwich with per-cell mean slack epsilon:
//   sum_j [ -(m_j + eps) + k_j ln(m_j - eps) - ln k_j! ]  <=  exact  <=
//   sum_j [ -(m_j - eps) + k_j ln(m_j + eps) - ln k_j! ].
// Monotone in eps for every count vector; eps = 0 collapses to the exact
// value. Requires eps < min_j m_j.
std::pair<double, double> sandwich_bounds(const BinnedMeasure& eta,
                                          const CellLaw& law, double lambda,
                                          double epsilon);

// Exact Binomial(n_pairs, p) pmf at k.
double binomial_edge_pmf(std::uint64_t k, std::uint64_t n_pairs, double p);

// Exact P(N > threshold) for N ~ Poisson(mean), by stable summation.
double poisson_tail(double mean, std::int64_t threshold);

// Bennett bound exp(-(lambda / a^2) * phi(a)), phi(u) = (1+u)ln(1+u) - u,
// for P(N - lambda > lambda).
double bennett_tail_bound(double lambda, double a);

}  // namespace boolnet
