// Lambda-sweep experiments: Monte Carlo event-probability estimation
// (full geometric simulation or the exact factorized cell-law shortcut),
// weighted log-probability slope fits against rate-function predictions,
// the mean-degree limit check, and the point-count bound check.
//
// Replicas are distributed over workers in fixed-size chunks with seeds
// derived from (master seed, chunk index); results do not depend on the
// worker count.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "boolnet/measures.hpp"
#include "boolnet/network.hpp"
#include "boolnet/oracle.hpp"
#include "boolnet/rates.hpp"

namespace boolnet {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t hits = 0;
};

using MeasurePredicate =
    std::function<bool(const BinnedMeasure&, const BinnedPairMeasure&)>;

// Event predicate corresponding to a half-space constraint.
MeasurePredicate predicate_for(const EventConstraint& constraint);

// Full end-to-end Monte Carlo: per replica, sample a configuration, build
// the network in the given mode, form (L1, L2), evaluate the predicate.
// Replica i is a pure function of (seed, i).
Estimate estimate_event_probability(const ScalingRegime& regime,
                                    std::shared_ptr<const Partition> partition,
                                    NetworkMode mode,
                                    const MeasurePredicate& predicate,
                                    std::uint64_t replicas, std::uint64_t seed,
                                    int workers = 0);

// Exact shortcut for mark-cell events: cell counts are independent
// Poissons, so only the constrained cell needs to be simulated. Sampling
// uses CDF-inversion tables (one uniform per replica).
Estimate estimate_mark_event_cell_law(const CellLaw& law, double lambda,
                                      const MarkCellConstraint& event,
                                      std::uint64_t replicas, std::uint64_t seed,
                                      int workers = 0);

// Conditional-law shortcut for single-cell pair events: the edge count given
// the mark mass is Binomial(round(lambda^2/2 * omega_mass^2),
// min(1, psi/lambda)); the event is 2|E|/lambda >= threshold.
Estimate estimate_pair_event_conditional(double lambda, double psi,
                                         double omega_mass, double threshold,
                                         std::uint64_t replicas,
                                         std::uint64_t seed, int workers = 0);

struct EventSpec {
  EventConstraint constraint;
  // Use the factorized cell-law / conditional-binomial shortcut when the
  // event shape allows it; false forces full geometric simulation.
  bool use_cell_law = true;
};

struct SweepPoint {
  double lambda = 0.0;
  Estimate estimate;
  bool excluded = false;  // zero hits at this lambda; not used in the fit
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double slope = 0.0;
  double slope_std_error = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // 95% interval
  double predicted_rate = 0.0;         // inf I over the event (positive)
  std::string verdict;                 // PASS | FAIL | INCONCLUSIVE
  std::vector<std::string> notes;
};

// Estimates P(event) on the lambda grid, fits log P against lambda by
// weighted least squares (delta-method weights, zero-hit points excluded),
// and compares the slope with -infimize_rate(event).
SweepResult ldp_slope(const ScalingRegime& base,
                      std::shared_ptr<const Partition> partition,
                      NetworkMode mode, const EventSpec& event,
                      const std::vector<double>& lambda_grid,
                      const std::vector<std::uint64_t>& replicas_per_lambda,
                      std::uint64_t seed, double slope_tolerance = 0.10,
                      int workers = 0);

// (1/2) integral of Psi against the product sampling law, by closed form
// (constant kernel) or Gauss-Legendre quadrature over the mark law
// (Corollary kernel).
double mean_degree_target(const ScalingRegime& regime, int quadrature_points = 32);

// Cell-discretized target (1/2) sum_ab Psi_bar(a,b) ref(a) ref(b); used for
// table/user kernels.
double mean_degree_target(const ScalingRegime& regime, const Partition& partition,
                          int kernel_subdivisions = 1);

struct MeanDegreePoint {
  double lambda = 0.0;
  double mean = 0.0;  // average |E| / lambda
  double std_error = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t clamped_pairs = 0;
};

struct MeanDegreeResult {
  std::vector<MeanDegreePoint> points;
  double target = 0.0;
  std::string verdict;  // PASS iff the final-lambda mean is within rel_tolerance
  std::vector<std::string> notes;
};

MeanDegreeResult mean_degree_check(const ScalingRegime& base,
                                   const std::vector<double>& lambda_grid,
                                   std::uint64_t replicas, std::uint64_t seed,
                                   double rel_tolerance = 0.05, int workers = 0);

struct PointCountReport {
  double lambda = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t violations = 0;  // replicas with |I| > 2 lambda
  double frequency = 0.0;
  double oracle_tail = 0.0;   // exact P(N > 2 lambda)
  double bennett_bound = 0.0;
  double bennett_a = 1.0;
  std::string verdict;  // PASS | FAIL, or INFO at tiny lambda
};

PointCountReport point_count_bound_check(const ScalingRegime& regime, double lambda,
                                         std::uint64_t replicas, std::uint64_t seed,
                                         double bennett_a = 1.0, int workers = 0);

// CSV (lambda, estimate, stderr, log_estimate, replicas) and JSON summary.
void write_sweep_csv(const SweepResult& result, std::ostream& os,
                     const std::string& header_comment = "");
std::string sweep_summary_json(const SweepResult& result,
                               const std::string& config_digest,
                               bool include_timestamp);

void write_mean_degree_csv(const MeanDegreeResult& result, std::ostream& os,
                           const std::string& header_comment = "");
std::string mean_degree_summary_json(const MeanDegreeResult& result,
                                     const std::string& config_digest,
                                     bool include_timestamp);

std::string point_count_report_json(const PointCountReport& report,
                                    const std::string& config_digest,
                                    bool include_timestamp);

}  // namespace boolnet
