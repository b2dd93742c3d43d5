// Reproducible sampling of marked Poisson point processes: draw
// N ~ Poisson(lambda), then N i.i.d. (position, radius) pairs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "boolnet/geometry.hpp"
#include "boolnet/model.hpp"

namespace boolnet {

struct MarkedConfiguration {
  int dim = 0;
  std::vector<double> positions;  // flat, size() == dim * count
  std::vector<double> radii;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return radii.size(); }

  std::span<const double> position(std::size_t i) const {
    return {positions.data() + static_cast<std::size_t>(dim) * i,
            static_cast<std::size_t>(dim)};
  }

  Ball ball(std::size_t i) const {
    auto p = position(i);
    return Ball(std::vector<double>(p.begin(), p.end()), radii[i]);
  }
};

// Identical (regime, dom, seed) yields identical output. Expected point
// count is regime.lambda(); positions are uniform on dom, radii follow the
// regime's mark law.
MarkedConfiguration sample_marked_ppp(const ScalingRegime& regime,
                                      const Domain& dom, std::uint64_t seed);

// Line-oriented text format: one point per line, d coordinates then the
// radius; lines starting with '#' are comments.
void write_points_text(const MarkedConfiguration& config, std::ostream& os,
                       const std::string& header_comment = "");
MarkedConfiguration read_points_text(std::istream& is);

std::string points_to_json(const MarkedConfiguration& config);
MarkedConfiguration points_from_json(const std::string& text);

}  // namespace boolnet
