#include "boolnet/sampler.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "boolnet/rng.hpp"

namespace boolnet {

MarkedConfiguration sample_marked_ppp(const ScalingRegime& regime,
                                      const Domain& dom, std::uint64_t seed) {
  MarkedConfiguration config;
  config.dim = dom.dim();
  config.lambda = regime.lambda();
  config.seed = seed;

  Rng rng(seed);
  const std::uint64_t count = rng.poisson(regime.lambda());
  config.positions.reserve(count * dom.dim());
  config.radii.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    for (int a = 0; a < dom.dim(); ++a) {
      config.positions.push_back(rng.uniform(dom.lower(a), dom.upper(a)));
    }
    config.radii.push_back(regime.mark_law().quantile(rng.uniform()));
  }
  return config;
}

void write_points_text(const MarkedConfiguration& config, std::ostream& os,
                       const std::string& header_comment) {
  if (!header_comment.empty()) os << "# " << header_comment << '\n';
  os.precision(17);
  for (std::size_t i = 0; i < config.size(); ++i) {
    auto p = config.position(i);
    for (int a = 0; a < config.dim; ++a) os << p[a] << ' ';
    os << config.radii[i] << '\n';
  }
}

MarkedConfiguration read_points_text(std::istream& is) {
  MarkedConfiguration config;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> values;
    double v;
    while (ls >> v) values.push_back(v);
    if (values.size() < 2) {
      throw std::runtime_error("read_points_text: malformed line: " + line);
    }
    if (config.dim == 0) {
      config.dim = static_cast<int>(values.size()) - 1;
    } else if (values.size() != static_cast<std::size_t>(config.dim) + 1) {
      throw std::runtime_error("read_points_text: inconsistent column count");
    }
    for (int a = 0; a < config.dim; ++a) config.positions.push_back(values[a]);
    config.radii.push_back(values.back());
  }
  return config;
}

std::string points_to_json(const MarkedConfiguration& config) {
  nlohmann::json j;
  j["dim"] = config.dim;
  j["lambda"] = config.lambda;
  j["seed"] = config.seed;
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < config.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    auto p = config.position(i);
    for (int a = 0; a < config.dim; ++a) row.push_back(p[a]);
    row.push_back(config.radii[i]);
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  return j.dump(2);
}

MarkedConfiguration points_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  MarkedConfiguration config;
  config.dim = j.at("dim").get<int>();
  config.lambda = j.at("lambda").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& row : j.at("points")) {
    if (row.size() != static_cast<std::size_t>(config.dim) + 1) {
      throw std::runtime_error("points_from_json: bad row length");
    }
    for (int a = 0; a < config.dim; ++a) {
      config.positions.push_back(row[a].get<double>());
    }
    config.radii.push_back(row[config.dim].get<double>());
  }
  return config;
}

}  // namespace boolnet
