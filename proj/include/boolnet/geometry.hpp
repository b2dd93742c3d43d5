// Euclidean primitives: box domains (bounded or periodic), balls,
// intersection tests, Minkowski-difference volumes.
#pragma once

#include <span>
#include <vector>

namespace boolnet {

enum class Topology { bounded, periodic };

// Axis-aligned box [lower, upper] in d dimensions. Periodic topology turns
// the box into a torus for distance computations.
class Domain {
 public:
  Domain(std::vector<double> lower, std::vector<double> upper,
         Topology topology = Topology::bounded);

  // The cube [0, side]^dim.
  static Domain box(int dim, double side, Topology topology = Topology::bounded);

  int dim() const { return static_cast<int>(lower_.size()); }
  Topology topology() const { return topology_; }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  double side(int axis) const { return upper_[axis] - lower_[axis]; }
  double volume() const;

  bool contains(std::span<const double> x) const;

  // Euclidean distance; wraps each coordinate on periodic domains.
  double distance(std::span<const double> a, std::span<const double> b) const;
  double distance_squared(std::span<const double> a,
                          std::span<const double> b) const;

 private:
  std::vector<double> lower_, upper_;
  Topology topology_;
};

struct Ball {
  std::vector<double> center;
  double radius = 0.0;

  Ball() = default;
  Ball(std::vector<double> c, double r);

  int dim() const { return static_cast<int>(center.size()); }
};

// Closed-ball convention: tangent balls intersect.
bool ball_intersects(const Ball& b1, const Ball& b2, const Domain& dom);

// Volume of {z1 - z2 : z1 in b1, z2 in b2}, a d-ball of radius r1 + r2.
// Center-independent; no clipping to any domain.
double minkowski_diff_volume(const Ball& b1, const Ball& b2);

}  // namespace boolnet
