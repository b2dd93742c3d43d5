// Scaling regimes: the system scale lambda, the sampling laws, and the
// connection kernel Psi. The finite-lambda connection probability is
// p = 1 - exp(-Psi/lambda); lambda * p -> Psi with remainder <= Psi^2/(2 lambda).
#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "boolnet/geometry.hpp"
#include "boolnet/partition.hpp"

namespace boolnet {

// Mark (coverage radius) law on [r_min, r_max].
class MarkLaw {
 public:
  static MarkLaw uniform(double r_min, double r_max);
  static MarkLaw point_mass(double r);
  // Density proportional to r^exponent on [r_min, r_max]; exponent > -1.
  static MarkLaw power(double exponent, double r_min, double r_max);

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

  double cdf(double r) const;
  // Probability of [lo, hi); the final bin of a partition is closed.
  double bin_mass(double lo, double hi, bool closed_hi) const;
  // Inverse-CDF sample from a uniform u in [0,1).
  double quantile(double u) const;

 private:
  enum class Kind { uniform, point, power };
  MarkLaw(Kind kind, double r_min, double r_max, double exponent);

  Kind kind_;
  double r_min_, r_max_;
  double exponent_ = 0.0;
};

// Kernel presets. CorollaryKernel is the d=3 coverage-volume kernel
// Psi(b1,b2) = (16/9) pi^2 r1^3 r2^3 Vol(b1 - b2) / Vol(D)^2.
struct CorollaryKernel {
  double vol_domain = 1.0;
};

struct ConstantKernel {
  double value = 0.0;
};

// Symmetric per-cell-pair values on a partition.
struct TableKernel {
  std::shared_ptr<const Partition> partition;
  std::vector<double> values;  // cell_count x cell_count, row-major
};

struct UserKernel {
  std::function<double(const Ball&, const Ball&)> fn;
};

using KernelSpec = std::variant<CorollaryKernel, ConstantKernel, TableKernel, UserKernel>;

// Scale bookkeeping of the critical regime: the intensity carries
// mu_lambda = lambda^3 * mu and the mark law Q_lambda = lambda^-2 * Q, so
// the pair exponent is Psi * lambda^(intensity + 2*mark) = Psi / lambda.
struct ScaleExponents {
  double intensity_exponent = 3.0;
  double mark_exponent = -2.0;

  double pair_exponent() const { return intensity_exponent + 2.0 * mark_exponent; }
};

// Immutable after construction; safe to share across workers.
class ScalingRegime {
 public:
  ScalingRegime(double lambda, Domain domain, MarkLaw mark_law, KernelSpec kernel,
                ScaleExponents scaling = ScaleExponents{});

  double lambda() const { return lambda_; }
  const Domain& domain() const { return domain_; }
  const MarkLaw& mark_law() const { return mark_law_; }
  const KernelSpec& kernel_spec() const { return kernel_; }
  const ScaleExponents& scale_exponents() const { return scaling_; }

  ScalingRegime with_lambda(double lambda) const;

 private:
  double lambda_;
  Domain domain_;
  MarkLaw mark_law_;
  KernelSpec kernel_;
  ScaleExponents scaling_;
};

// Limiting kernel Psi(b1, b2) = lim lambda * p_lambda.
double kernel_limit(const Ball& b1, const Ball& b2, const ScalingRegime& regime);

// Finite-lambda connection probability 1 - exp(-Psi * lambda^s), s from the
// paper scaling (s = -1 for the default bookkeeping).
double connection_probability(const Ball& b1, const Ball& b2,
                              const ScalingRegime& regime);

// Canonical-regime edge probability min(1, psi / lambda).
double edge_probability_at_lambda(double psi, double lambda);

// Cell-averaged kernel matrix on a partition. subdivisions = 1 evaluates at
// cell midpoints; subdivisions = s averages a s-per-axis midpoint subgrid
// (positions and radius) on both endpoints.
std::vector<double> cell_kernel_matrix(const ScalingRegime& regime,
                                       const Partition& partition,
                                       int subdivisions = 1);

}  // namespace boolnet
