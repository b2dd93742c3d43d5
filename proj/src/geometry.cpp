#include "boolnet/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "boolnet/math_util.hpp"

namespace boolnet {

Domain::Domain(std::vector<double> lower, std::vector<double> upper,
               Topology topology)
    : lower_(std::move(lower)), upper_(std::move(upper)), topology_(topology) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw std::invalid_argument("Domain: corner vectors must be nonempty and equal-length");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(upper_[i] > lower_[i])) {
      throw std::invalid_argument("Domain: upper must exceed lower on every axis");
    }
  }
}

Domain Domain::box(int dim, double side, Topology topology) {
  if (dim < 1) throw std::invalid_argument("Domain::box: dim < 1");
  if (!(side > 0.0)) throw std::invalid_argument("Domain::box: side must be > 0");
  return Domain(std::vector<double>(dim, 0.0), std::vector<double>(dim, side),
                topology);
}

double Domain::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= side(a);
  return v;
}

bool Domain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("Domain::contains: dimension mismatch");
  }
  for (int a = 0; a < dim(); ++a) {
    if (x[a] < lower_[a] || x[a] > upper_[a]) return false;
  }
  return true;
}

double Domain::distance_squared(std::span<const double> a,
                                std::span<const double> b) const {
  if (static_cast<int>(a.size()) != dim() || static_cast<int>(b.size()) != dim()) {
    throw std::invalid_argument("Domain::distance: dimension mismatch");
  }
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i) {
    double diff = a[i] - b[i];
    if (topology_ == Topology::periodic) {
      const double len = side(i);
      diff = std::remainder(diff, len);  // wraps into [-len/2, len/2]
    }
    sum += diff * diff;
  }
  return sum;
}

double Domain::distance(std::span<const double> a,
                        std::span<const double> b) const {
  return std::sqrt(distance_squared(a, b));
}

Ball::Ball(std::vector<double> c, double r) : center(std::move(c)), radius(r) {
  if (center.empty()) throw std::invalid_argument("Ball: empty center");
  if (radius < 0.0) throw std::invalid_argument("Ball: negative radius");
}

bool ball_intersects(const Ball& b1, const Ball& b2, const Domain& dom) {
  if (b1.dim() != b2.dim() || b1.dim() != dom.dim()) {
    throw std::invalid_argument("ball_intersects: dimension mismatch");
  }
  const double reach = b1.radius + b2.radius;
  return dom.distance_squared(b1.center, b2.center) <= reach * reach;
}

double minkowski_diff_volume(const Ball& b1, const Ball& b2) {
  if (b1.dim() != b2.dim()) {
    throw std::invalid_argument("minkowski_diff_volume: dimension mismatch");
  }
  const double r = b1.radius + b2.radius;
  if (r == 0.0) return 0.0;
  return unit_ball_volume(b1.dim()) * std::pow(r, b1.dim());
}

}  // namespace boolnet
