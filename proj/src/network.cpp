#include "boolnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "boolnet/rng.hpp"

namespace boolnet {

namespace {

// Uniform grid over the domain with cell size >= 2 * r_max, so any
// intersecting pair lives in the same or adjacent cells.
struct PointGrid {
  std::vector<int> cells_per_axis;
  std::vector<double> inv_cell_size;
  std::vector<std::vector<std::uint32_t>> members;
  const Domain* dom = nullptr;

  PointGrid(const MarkedConfiguration& config, const Domain& domain) {
    dom = &domain;
    const int d = domain.dim();
    double r_max = 0.0;
    for (double r : config.radii) r_max = std::max(r_max, r);

    cells_per_axis.resize(d);
    inv_cell_size.resize(d);
    // Cap total cells near the point count; fewer cells only costs time.
    const double target_axis =
        std::max(1.0, std::floor(std::pow(static_cast<double>(config.size()) + 1.0,
                                          1.0 / d)));
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) {
      int n;
      if (r_max > 0.0) {
        n = static_cast<int>(std::floor(domain.side(a) / (2.0 * r_max)));
        n = std::clamp(n, 1, static_cast<int>(target_axis) + 1);
      } else {
        n = static_cast<int>(target_axis);
      }
      cells_per_axis[a] = n;
      inv_cell_size[a] = static_cast<double>(n) / domain.side(a);
      total *= static_cast<std::size_t>(n);
    }
    members.resize(total);
    for (std::uint32_t i = 0; i < config.size(); ++i) {
      members[cell_of(config.position(i))].push_back(i);
    }
  }

  std::size_t flatten(const std::vector<int>& idx) const {
    std::size_t cell = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      cell = cell * static_cast<std::size_t>(cells_per_axis[a]) +
             static_cast<std::size_t>(idx[a]);
    }
    return cell;
  }

  std::size_t cell_of(std::span<const double> p) const {
    std::vector<int> idx(cells_per_axis.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      int i = static_cast<int>((p[a] - dom->lower(static_cast<int>(a))) *
                               inv_cell_size[a]);
      idx[a] = std::clamp(i, 0, cells_per_axis[a] - 1);
    }
    return flatten(idx);
  }

  std::vector<int> unflatten(std::size_t cell) const {
    std::vector<int> idx(cells_per_axis.size());
    for (int a = static_cast<int>(idx.size()) - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(cell % cells_per_axis[a]);
      cell /= static_cast<std::size_t>(cells_per_axis[a]);
    }
    return idx;
  }

  // Distinct neighbor cell ids (full stencil, wrapped on periodic domains).
  std::vector<std::size_t> neighbor_cells(std::size_t cell) const {
    const int d = static_cast<int>(cells_per_axis.size());
    const auto base = unflatten(cell);
    std::vector<std::size_t> out;
    std::vector<int> offset(d, -1);
    while (true) {
      std::vector<int> idx(d);
      bool valid = true;
      for (int a = 0; a < d && valid; ++a) {
        int v = base[a] + offset[a];
        if (dom->topology() == Topology::periodic) {
          v = (v % cells_per_axis[a] + cells_per_axis[a]) % cells_per_axis[a];
        } else if (v < 0 || v >= cells_per_axis[a]) {
          valid = false;
        }
        idx[a] = v;
      }
      if (valid) {
        const std::size_t n = flatten(idx);
        if (n != cell) out.push_back(n);
      }
      int a = d - 1;
      while (a >= 0 && ++offset[a] == 2) offset[a--] = -1;
      if (a < 0) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

void validate_config(const MarkedConfiguration& config, const Domain& dom) {
  if (config.size() > 0 && config.dim != dom.dim()) {
    throw std::invalid_argument("network: configuration/domain dimension mismatch");
  }
}

}  // namespace

void for_each_candidate_pair(
    const MarkedConfiguration& config, const Domain& dom,
    const std::function<void(std::uint32_t, std::uint32_t)>& fn) {
  validate_config(config, dom);
  if (config.size() < 2) return;
  PointGrid grid(config, dom);

  for (std::size_t c = 0; c < grid.members.size(); ++c) {
    const auto& mine = grid.members[c];
    if (mine.empty()) continue;
    for (std::size_t i = 0; i < mine.size(); ++i) {
      for (std::size_t j = i + 1; j < mine.size(); ++j) {
        fn(std::min(mine[i], mine[j]), std::max(mine[i], mine[j]));
      }
    }
    // Each unordered cell pair is visited once: from its lower cell id.
    for (std::size_t n : grid.neighbor_cells(c)) {
      if (n <= c) continue;
      for (std::uint32_t a : mine) {
        for (std::uint32_t b : grid.members[n]) {
          fn(std::min(a, b), std::max(a, b));
        }
      }
    }
  }
}

EdgeList candidate_pairs(const MarkedConfiguration& config, const Domain& dom) {
  EdgeList pairs;
  for_each_candidate_pair(config, dom,
                          [&](std::uint32_t i, std::uint32_t j) { pairs.emplace_back(i, j); });
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

BooleanNetwork build_hard(const MarkedConfiguration& config, const Domain& dom) {
  validate_config(config, dom);
  BooleanNetwork net;
  net.config = config;
  net.mode = NetworkMode::hard;
  for_each_candidate_pair(config, dom, [&](std::uint32_t i, std::uint32_t j) {
    const double reach = config.radii[i] + config.radii[j];
    if (dom.distance_squared(config.position(i), config.position(j)) <=
        reach * reach) {
      net.edges.emplace_back(i, j);
    }
  });
  std::sort(net.edges.begin(), net.edges.end());
  net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
  return net;
}

BooleanNetwork build_hard_brute_force(const MarkedConfiguration& config,
                                      const Domain& dom) {
  validate_config(config, dom);
  BooleanNetwork net;
  net.config = config;
  net.mode = NetworkMode::hard;
  const std::size_t n = config.size();
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double reach = config.radii[i] + config.radii[j];
      if (dom.distance_squared(config.position(i), config.position(j)) <=
          reach * reach) {
        net.edges.emplace_back(i, j);
      }
    }
  }
  return net;
}

BooleanNetwork build_soft(const MarkedConfiguration& config,
                          const ScalingRegime& regime, std::uint64_t seed) {
  BooleanNetwork net;
  net.config = config;
  net.mode = NetworkMode::soft;
  const std::size_t n = config.size();
  if (n < 2) return net;

  std::vector<Ball> balls;
  balls.reserve(n);
  for (std::size_t i = 0; i < n; ++i) balls.push_back(config.ball(i));

  Rng rng(seed);
  const double lambda = regime.lambda();
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double psi = kernel_limit(balls[i], balls[j], regime);
      if (psi >= lambda) ++net.clamped_pairs;
      if (rng.bernoulli(edge_probability_at_lambda(psi, lambda))) {
        net.edges.emplace_back(i, j);
      }
    }
  }
  return net;
}

void write_edges_csv(const BooleanNetwork& net, std::ostream& os,
                     const std::string& header_comment) {
  if (!header_comment.empty()) os << "# " << header_comment << '\n';
  os << "i,j\n";
  for (const auto& [i, j] : net.edges) os << i << ',' << j << '\n';
}

}  // namespace boolnet
