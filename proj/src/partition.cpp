#include "boolnet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "boolnet/math_util.hpp"

namespace boolnet {

namespace {

bool edges_valid(const std::vector<double>& edges) {
  if (edges.size() < 2) return false;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) return false;
  }
  return true;
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Bin of x in edges, half-open with the last bin closed; -1 if outside.
int bin_of(const std::vector<double>& edges, double x) {
  if (x < edges.front() || x > edges.back()) return -1;
  if (x == edges.back()) return static_cast<int>(edges.size()) - 2;
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return static_cast<int>(it - edges.begin()) - 1;
}

bool contains_edge(const std::vector<double>& edges, double e) {
  for (double v : edges) {
    if (close(v, e)) return true;
  }
  return false;
}

}  // namespace

Partition::Partition(const Domain& dom,
                     std::vector<std::vector<double>> position_edges,
                     std::vector<double> radius_edges)
    : position_edges_(std::move(position_edges)),
      radius_edges_(std::move(radius_edges)) {
  if (static_cast<int>(position_edges_.size()) != dom.dim()) {
    throw std::invalid_argument("Partition: one edge list per axis required");
  }
  cell_count_ = 1;
  for (int a = 0; a < dim(); ++a) {
    const auto& e = position_edges_[a];
    if (!edges_valid(e)) throw std::invalid_argument("Partition: bad position edges");
    if (!close(e.front(), dom.lower(a)) || !close(e.back(), dom.upper(a))) {
      throw std::invalid_argument("Partition: position edges must span the domain");
    }
    cell_count_ *= e.size() - 1;
  }
  if (!edges_valid(radius_edges_)) {
    throw std::invalid_argument("Partition: bad radius edges");
  }
  if (radius_edges_.front() < 0.0) {
    throw std::invalid_argument("Partition: negative radius edge");
  }
  cell_count_ *= radius_edges_.size() - 1;
}

Partition Partition::regular(const Domain& dom, const std::vector<int>& bins_per_axis,
                             int radius_bins, double r_min, double r_max) {
  if (static_cast<int>(bins_per_axis.size()) != dom.dim()) {
    throw std::invalid_argument("Partition::regular: bins_per_axis size mismatch");
  }
  if (radius_bins < 1 || !(r_max > r_min) || r_min < 0.0) {
    throw std::invalid_argument("Partition::regular: bad radius bins");
  }
  std::vector<std::vector<double>> pos_edges(dom.dim());
  for (int a = 0; a < dom.dim(); ++a) {
    const int n = bins_per_axis[a];
    if (n < 1) throw std::invalid_argument("Partition::regular: bins < 1");
    pos_edges[a].resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      pos_edges[a][i] = dom.lower(a) + dom.side(a) * static_cast<double>(i) / n;
    }
  }
  std::vector<double> r_edges(radius_bins + 1);
  for (int i = 0; i <= radius_bins; ++i) {
    r_edges[i] = r_min + (r_max - r_min) * static_cast<double>(i) / radius_bins;
  }
  return Partition(dom, std::move(pos_edges), std::move(r_edges));
}

Partition Partition::trivial(const Domain& dom, double r_min, double r_max) {
  return regular(dom, std::vector<int>(dom.dim(), 1), 1, r_min, r_max);
}

std::size_t Partition::locate(std::span<const double> position, double radius) const {
  if (static_cast<int>(position.size()) != dim()) {
    throw std::invalid_argument("Partition::locate: dimension mismatch");
  }
  std::size_t cell = 0;
  for (int a = 0; a < dim(); ++a) {
    const int b = bin_of(position_edges_[a], position[a]);
    if (b < 0) throw std::out_of_range("Partition::locate: position outside grid");
    cell = cell * (position_edges_[a].size() - 1) + static_cast<std::size_t>(b);
  }
  const int rb = bin_of(radius_edges_, radius);
  if (rb < 0) throw std::out_of_range("Partition::locate: radius outside bins");
  return cell * (radius_edges_.size() - 1) + static_cast<std::size_t>(rb);
}

std::vector<int> Partition::decode(std::size_t cell) const {
  if (cell >= cell_count_) throw std::out_of_range("Partition: bad cell index");
  std::vector<int> idx(dim() + 1);
  idx[dim()] = static_cast<int>(cell % (radius_edges_.size() - 1));
  cell /= radius_edges_.size() - 1;
  for (int a = dim() - 1; a >= 0; --a) {
    const std::size_t n = position_edges_[a].size() - 1;
    idx[a] = static_cast<int>(cell % n);
    cell /= n;
  }
  return idx;
}

Ball Partition::cell_midpoint(std::size_t cell) const {
  const auto idx = decode(cell);
  std::vector<double> center(dim());
  for (int a = 0; a < dim(); ++a) {
    const auto& e = position_edges_[a];
    center[a] = 0.5 * (e[idx[a]] + e[idx[a] + 1]);
  }
  const double r =
      0.5 * (radius_edges_[idx[dim()]] + radius_edges_[idx[dim()] + 1]);
  return Ball(std::move(center), r);
}

double Partition::cell_position_volume(std::size_t cell) const {
  const auto idx = decode(cell);
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) {
    const auto& e = position_edges_[a];
    v *= e[idx[a] + 1] - e[idx[a]];
  }
  return v;
}

void Partition::cell_radius_bounds(std::size_t cell, double& lo, double& hi) const {
  const auto idx = decode(cell);
  lo = radius_edges_[idx[dim()]];
  hi = radius_edges_[idx[dim()] + 1];
}

bool Partition::is_last_radius_bin(std::size_t cell) const {
  const auto idx = decode(cell);
  return idx[dim()] == radius_bins() - 1;
}

void Partition::cell_axis_bounds(std::size_t cell, int axis, double& lo,
                                 double& hi) const {
  const auto idx = decode(cell);
  const auto& e = position_edges_[axis];
  lo = e[idx[axis]];
  hi = e[idx[axis] + 1];
}

bool Partition::is_coarsening_of(const Partition& fine) const {
  if (dim() != fine.dim()) return false;
  for (int a = 0; a < dim(); ++a) {
    for (double e : position_edges_[a]) {
      if (!contains_edge(fine.position_edges_[a], e)) return false;
    }
  }
  for (double e : radius_edges_) {
    if (!contains_edge(fine.radius_edges_, e)) return false;
  }
  return true;
}

std::size_t Partition::cell_of_fine_cell(const Partition& fine,
                                         std::size_t fine_cell) const {
  const Ball mid = fine.cell_midpoint(fine_cell);
  return locate(mid.center, mid.radius);
}

bool Partition::same_grid(const Partition& other) const {
  if (dim() != other.dim() || radius_edges_.size() != other.radius_edges_.size()) {
    return false;
  }
  for (int a = 0; a < dim(); ++a) {
    const auto& ea = position_edges_[a];
    const auto& eb = other.position_edges_[a];
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (!close(ea[i], eb[i])) return false;
    }
  }
  for (std::size_t i = 0; i < radius_edges_.size(); ++i) {
    if (!close(radius_edges_[i], other.radius_edges_[i])) return false;
  }
  return true;
}

std::uint64_t Partition::digest() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& axis : position_edges_) {
    os << "p:";
    for (double e : axis) os << e << ',';
  }
  os << "r:";
  for (double e : radius_edges_) os << e << ',';
  return fnv1a64(os.str());
}

}  // namespace boolnet
