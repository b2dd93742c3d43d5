#include "boolnet/model.hpp"

#include <cmath>
#include <stdexcept>

namespace boolnet {

MarkLaw::MarkLaw(Kind kind, double r_min, double r_max, double exponent)
    : kind_(kind), r_min_(r_min), r_max_(r_max), exponent_(exponent) {
  if (r_min_ < 0.0) throw std::invalid_argument("MarkLaw: r_min < 0");
  if (kind_ != Kind::point && !(r_max_ > r_min_)) {
    throw std::invalid_argument("MarkLaw: empty mark support");
  }
}

MarkLaw MarkLaw::uniform(double r_min, double r_max) {
  return MarkLaw(Kind::uniform, r_min, r_max, 0.0);
}

MarkLaw MarkLaw::point_mass(double r) {
  if (r < 0.0) throw std::invalid_argument("MarkLaw::point_mass: r < 0");
  return MarkLaw(Kind::point, r, r, 0.0);
}

MarkLaw MarkLaw::power(double exponent, double r_min, double r_max) {
  if (exponent <= -1.0) {
    throw std::invalid_argument("MarkLaw::power: exponent must be > -1");
  }
  return MarkLaw(Kind::power, r_min, r_max, exponent);
}

double MarkLaw::cdf(double r) const {
  if (r < r_min_) return 0.0;
  if (r >= r_max_) return 1.0;
  switch (kind_) {
    case Kind::uniform:
      return (r - r_min_) / (r_max_ - r_min_);
    case Kind::point:
      return r >= r_min_ ? 1.0 : 0.0;
    case Kind::power: {
      const double a = exponent_ + 1.0;
      const double lo = std::pow(r_min_, a);
      return (std::pow(r, a) - lo) / (std::pow(r_max_, a) - lo);
    }
  }
  return 0.0;
}

double MarkLaw::bin_mass(double lo, double hi, bool closed_hi) const {
  if (kind_ == Kind::point) {
    const double r = r_min_;
    const bool in = (r >= lo) && (r < hi || (closed_hi && r <= hi));
    return in ? 1.0 : 0.0;
  }
  return cdf(hi) - cdf(lo);
}

double MarkLaw::quantile(double u) const {
  switch (kind_) {
    case Kind::uniform:
      return r_min_ + u * (r_max_ - r_min_);
    case Kind::point:
      return r_min_;
    case Kind::power: {
      const double a = exponent_ + 1.0;
      const double lo = std::pow(r_min_, a);
      const double hi = std::pow(r_max_, a);
      return std::pow(lo + u * (hi - lo), 1.0 / a);
    }
  }
  return r_min_;
}

ScalingRegime::ScalingRegime(double lambda, Domain domain, MarkLaw mark_law,
                             KernelSpec kernel, ScaleExponents scaling)
    : lambda_(lambda),
      domain_(std::move(domain)),
      mark_law_(std::move(mark_law)),
      kernel_(std::move(kernel)),
      scaling_(scaling) {
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
    throw std::invalid_argument("ScalingRegime: lambda must be finite and >= 0");
  }
  if (const auto* ck = std::get_if<CorollaryKernel>(&kernel_)) {
    if (domain_.dim() != 3) {
      throw std::invalid_argument("CorollaryKernel requires dimension 3");
    }
    if (!(ck->vol_domain > 0.0)) {
      throw std::invalid_argument("CorollaryKernel: vol_domain must be > 0");
    }
  }
}

ScalingRegime ScalingRegime::with_lambda(double lambda) const {
  ScalingRegime copy = *this;
  copy.lambda_ = lambda;
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("ScalingRegime::with_lambda: bad lambda");
  }
  return copy;
}

double kernel_limit(const Ball& b1, const Ball& b2, const ScalingRegime& regime) {
  const KernelSpec& spec = regime.kernel_spec();
  if (const auto* ck = std::get_if<CorollaryKernel>(&spec)) {
    if (b1.dim() != 3 || b2.dim() != 3) {
      throw std::invalid_argument("kernel_limit: CorollaryKernel requires d = 3");
    }
    const double r1 = b1.radius, r2 = b2.radius;
    const double mink = minkowski_diff_volume(b1, b2);
    return (16.0 / 9.0) * M_PI * M_PI * r1 * r1 * r1 * r2 * r2 * r2 * mink /
           (ck->vol_domain * ck->vol_domain);
  }
  if (const auto* c = std::get_if<ConstantKernel>(&spec)) {
    return c->value;
  }
  if (const auto* t = std::get_if<TableKernel>(&spec)) {
    const std::size_t a = t->partition->locate(b1.center, b1.radius);
    const std::size_t b = t->partition->locate(b2.center, b2.radius);
    return t->values[a * t->partition->cell_count() + b];
  }
  const auto& u = std::get<UserKernel>(spec);
  return u.fn(b1, b2);
}

double connection_probability(const Ball& b1, const Ball& b2,
                              const ScalingRegime& regime) {
  const double psi = kernel_limit(b1, b2, regime);
  const double exponent =
      psi * std::pow(regime.lambda(), regime.scale_exponents().pair_exponent());
  if (exponent < 0.0 || !std::isfinite(exponent)) {
    throw std::domain_error("connection_probability: negative or non-finite exponent");
  }
  return -std::expm1(-exponent);
}

double edge_probability_at_lambda(double psi, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("edge_probability_at_lambda: lambda must be > 0");
  }
  if (psi < 0.0) {
    throw std::invalid_argument("edge_probability_at_lambda: psi must be >= 0");
  }
  return std::min(1.0, psi / lambda);
}

std::vector<double> cell_kernel_matrix(const ScalingRegime& regime,
                                       const Partition& partition,
                                       int subdivisions) {
  if (subdivisions < 1) {
    throw std::invalid_argument("cell_kernel_matrix: subdivisions < 1");
  }
  const std::size_t n = partition.cell_count();

  // A table kernel on the same grid is already per-cell.
  if (const auto* t = std::get_if<TableKernel>(&regime.kernel_spec())) {
    if (t->partition->same_grid(partition)) return t->values;
  }

  // Sub-midpoints of each cell: s points per axis and per radius bin.
  const int s = subdivisions;
  std::vector<std::vector<Ball>> points(n);
  const int d = partition.dim();
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<double>> coords(d + 1);
    for (int a = 0; a < d; ++a) {
      double lo, hi;
      partition.cell_axis_bounds(c, a, lo, hi);
      for (int i = 0; i < s; ++i) {
        coords[a].push_back(lo + (hi - lo) * (2.0 * i + 1.0) / (2.0 * s));
      }
    }
    double rlo, rhi;
    partition.cell_radius_bounds(c, rlo, rhi);
    for (int i = 0; i < s; ++i) {
      coords[d].push_back(rlo + (rhi - rlo) * (2.0 * i + 1.0) / (2.0 * s));
    }
    std::vector<int> idx(d + 1, 0);
    while (true) {
      std::vector<double> center(d);
      for (int a = 0; a < d; ++a) center[a] = coords[a][idx[a]];
      points[c].emplace_back(std::move(center), coords[d][idx[d]]);
      int a = d;
      while (a >= 0 && ++idx[a] == s) idx[a--] = 0;
      if (a < 0) break;
    }
  }

  std::vector<double> mat(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double sum = 0.0;
      for (const Ball& pa : points[a]) {
        for (const Ball& pb : points[b]) {
          sum += kernel_limit(pa, pb, regime);
        }
      }
      const double avg = sum / (static_cast<double>(points[a].size()) *
                                static_cast<double>(points[b].size()));
      mat[a * n + b] = avg;
      mat[b * n + a] = avg;
    }
  }
  return mat;
}

}  // namespace boolnet
