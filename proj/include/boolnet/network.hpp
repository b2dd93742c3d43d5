// Boolean connectivity graphs over marked configurations. Hard mode links
// every pair of intersecting balls (grid-accelerated); soft mode links each
// pair independently with probability min(1, Psi/lambda).
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "boolnet/model.hpp"
#include "boolnet/sampler.hpp"

namespace boolnet {

enum class NetworkMode { hard, soft };

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct BooleanNetwork {
  MarkedConfiguration config;
  EdgeList edges;  // i < j, sorted, no duplicates
  NetworkMode mode = NetworkMode::hard;
  // Pairs whose edge probability hit the min(1, .) clamp in soft mode;
  // a nonzero count invalidates mean-degree comparisons.
  std::uint64_t clamped_pairs = 0;
};

// Exact hard-geometry graph: edge iff the balls intersect.
BooleanNetwork build_hard(const MarkedConfiguration& config, const Domain& dom);

// Reference quadratic-scan variant, used as the oracle for the grid path.
BooleanNetwork build_hard_brute_force(const MarkedConfiguration& config,
                                      const Domain& dom);

// Independent Bernoulli edges with probability min(1, Psi(B_i,B_j)/lambda);
// deterministic given the seed.
BooleanNetwork build_soft(const MarkedConfiguration& config,
                          const ScalingRegime& regime, std::uint64_t seed);

// Broad phase: calls fn(i, j) with i < j for a superset of the intersecting
// pairs, each pair at most once, using a uniform spatial hash grid with cell
// size >= 2 * max radius. Periodic domains wrap the neighbor stencil.
void for_each_candidate_pair(
    const MarkedConfiguration& config, const Domain& dom,
    const std::function<void(std::uint32_t, std::uint32_t)>& fn);

EdgeList candidate_pairs(const MarkedConfiguration& config, const Domain& dom);

// CSV export, one "i,j" row per edge.
void write_edges_csv(const BooleanNetwork& net, std::ostream& os,
                     const std::string& header_comment = "");

}  // namespace boolnet
