// Finite decomposition of position-space x radius-space into grid cells.
// Binning is half-open [lo, hi) with the final bin closed, so every point
// maps to exactly one cell.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boolnet/geometry.hpp"

namespace boolnet {

class Partition {
 public:
  // Explicit per-axis position edges plus radius edges. Position edges must
  // span the domain box exactly; all edge lists must be strictly increasing.
  Partition(const Domain& dom, std::vector<std::vector<double>> position_edges,
            std::vector<double> radius_edges);

  // Uniform grid: bins_per_axis position bins per axis, radius_bins over
  // [r_min, r_max].
  static Partition regular(const Domain& dom, const std::vector<int>& bins_per_axis,
                           int radius_bins, double r_min, double r_max);

  // Single cell covering everything.
  static Partition trivial(const Domain& dom, double r_min, double r_max);

  int dim() const { return static_cast<int>(position_edges_.size()); }
  std::size_t cell_count() const { return cell_count_; }
  int position_bins(int axis) const {
    return static_cast<int>(position_edges_[axis].size()) - 1;
  }
  int radius_bins() const { return static_cast<int>(radius_edges_.size()) - 1; }

  const std::vector<double>& position_edges(int axis) const {
    return position_edges_[axis];
  }
  const std::vector<double>& radius_edges() const { return radius_edges_; }

  // Cell index of a (position, radius) pair; throws std::out_of_range for
  // points outside the grid.
  std::size_t locate(std::span<const double> position, double radius) const;

  // Midpoint of a cell, as a ball (position center, radius-bin midpoint).
  Ball cell_midpoint(std::size_t cell) const;

  // Product of the position-edge spans of the cell (ignores the radius bin).
  double cell_position_volume(std::size_t cell) const;

  // Radius-bin bounds of a cell.
  void cell_radius_bounds(std::size_t cell, double& lo, double& hi) const;
  bool is_last_radius_bin(std::size_t cell) const;

  // Per-axis/radius sub-bounds of a cell.
  void cell_axis_bounds(std::size_t cell, int axis, double& lo, double& hi) const;

  // True when every edge of *this appears among the edges of `fine`,
  // i.e. each of our cells is a union of fine cells.
  bool is_coarsening_of(const Partition& fine) const;

  // Coarse cell containing the given fine cell (valid when
  // is_coarsening_of(fine)).
  std::size_t cell_of_fine_cell(const Partition& fine, std::size_t fine_cell) const;

  bool same_grid(const Partition& other) const;

  // Stable digest of the grid layout, for file provenance checks.
  std::uint64_t digest() const;

 private:
  std::vector<int> decode(std::size_t cell) const;

  std::vector<std::vector<double>> position_edges_;
  std::vector<double> radius_edges_;
  std::size_t cell_count_ = 0;
};

}  // namespace boolnet
