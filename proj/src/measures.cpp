#include "boolnet/measures.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "boolnet/math_util.hpp"

namespace boolnet {

namespace {

std::shared_ptr<const Partition> require_partition(
    std::shared_ptr<const Partition> p) {
  if (!p) throw std::invalid_argument("measure: null partition");
  return p;
}

}  // namespace

BinnedMeasure::BinnedMeasure(std::shared_ptr<const Partition> partition,
                             std::vector<double> mass)
    : partition_(require_partition(std::move(partition))), mass_(std::move(mass)) {
  if (mass_.size() != partition_->cell_count()) {
    throw std::invalid_argument("BinnedMeasure: mass size != cell count");
  }
  for (double m : mass_) {
    if (m < 0.0 || !std::isfinite(m)) {
      throw std::invalid_argument("BinnedMeasure: masses must be finite and >= 0");
    }
  }
}

BinnedMeasure BinnedMeasure::zero(std::shared_ptr<const Partition> partition) {
  auto p = require_partition(std::move(partition));
  std::vector<double> mass(p->cell_count(), 0.0);
  return BinnedMeasure(std::move(p), std::move(mass));
}

double BinnedMeasure::total_mass() const {
  KahanSum sum;
  for (double m : mass_) sum.add(m);
  return sum.value();
}

BinnedPairMeasure::BinnedPairMeasure(std::shared_ptr<const Partition> partition,
                                     std::vector<double> mass)
    : partition_(require_partition(std::move(partition))),
      cells_(partition_->cell_count()),
      mass_(std::move(mass)) {
  if (mass_.size() != cells_ * cells_) {
    throw std::invalid_argument("BinnedPairMeasure: mass size != cells^2");
  }
  for (double m : mass_) {
    if (m < 0.0 || !std::isfinite(m)) {
      throw std::invalid_argument("BinnedPairMeasure: masses must be finite and >= 0");
    }
  }
}

BinnedPairMeasure BinnedPairMeasure::zero(std::shared_ptr<const Partition> partition) {
  auto p = require_partition(std::move(partition));
  std::vector<double> mass(p->cell_count() * p->cell_count(), 0.0);
  return BinnedPairMeasure(std::move(p), std::move(mass));
}

double BinnedPairMeasure::total_mass() const {
  KahanSum sum;
  for (double m : mass_) sum.add(m);
  return sum.value();
}

bool BinnedPairMeasure::is_symmetric(double rel_tol) const {
  for (std::size_t a = 0; a < cells_; ++a) {
    for (std::size_t b = a + 1; b < cells_; ++b) {
      const double x = (*this)(a, b), y = (*this)(b, a);
      if (std::abs(x - y) > rel_tol * std::max({1.0, std::abs(x), std::abs(y)})) {
        return false;
      }
    }
  }
  return true;
}

BinnedMeasure empirical_mark_measure(const BooleanNetwork& net,
                                     std::shared_ptr<const Partition> partition) {
  auto m = BinnedMeasure::zero(std::move(partition));
  const auto& config = net.config;
  if (config.lambda <= 0.0 && config.size() > 0) {
    throw std::invalid_argument("empirical_mark_measure: lambda must be > 0");
  }
  const double w = config.size() > 0 ? 1.0 / config.lambda : 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    m.at(m.partition().locate(config.position(i), config.radii[i])) += w;
  }
  return m;
}

BinnedPairMeasure empirical_connectivity_measure(
    const BooleanNetwork& net, std::shared_ptr<const Partition> partition) {
  auto m = BinnedPairMeasure::zero(std::move(partition));
  const auto& config = net.config;
  if (net.edges.empty()) return m;
  if (config.lambda <= 0.0) {
    throw std::invalid_argument("empirical_connectivity_measure: lambda must be > 0");
  }
  std::vector<std::size_t> cell_of(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    cell_of[i] = m.partition().locate(config.position(i), config.radii[i]);
  }
  const double w = 1.0 / config.lambda;
  for (const auto& [i, j] : net.edges) {
    m.at(cell_of[i], cell_of[j]) += w;
    m.at(cell_of[j], cell_of[i]) += w;
  }
  return m;
}

BinnedMeasure coarsen(const BinnedMeasure& m,
                      std::shared_ptr<const Partition> coarse) {
  auto cp = require_partition(std::move(coarse));
  if (!cp->is_coarsening_of(m.partition())) {
    throw std::invalid_argument("coarsen: target is not a coarsening of the source");
  }
  auto out = BinnedMeasure::zero(cp);
  for (std::size_t c = 0; c < m.cells(); ++c) {
    out.at(cp->cell_of_fine_cell(m.partition(), c)) += m[c];
  }
  return out;
}

BinnedMeasure reference_measure(const ScalingRegime& regime,
                                std::shared_ptr<const Partition> partition) {
  auto m = BinnedMeasure::zero(std::move(partition));
  const Partition& part = m.partition();
  const double vol = regime.domain().volume();
  for (std::size_t c = 0; c < part.cell_count(); ++c) {
    double rlo, rhi;
    part.cell_radius_bounds(c, rlo, rhi);
    const double pos_mass = part.cell_position_volume(c) / vol;
    const double rad_mass =
        regime.mark_law().bin_mass(rlo, rhi, part.is_last_radius_bin(c));
    m.at(c) = pos_mass * rad_mass;
  }
  return m;
}

std::string partition_to_json(const Partition& partition) {
  nlohmann::json j;
  j["dim"] = partition.dim();
  nlohmann::json axes = nlohmann::json::array();
  for (int a = 0; a < partition.dim(); ++a) axes.push_back(partition.position_edges(a));
  j["position_edges"] = std::move(axes);
  j["radius_edges"] = partition.radius_edges();
  return j.dump();
}

namespace {

std::shared_ptr<const Partition> partition_from_json_obj(const nlohmann::json& j,
                                                         const Domain& dom) {
  std::vector<std::vector<double>> pos_edges;
  for (const auto& axis : j.at("position_edges")) {
    pos_edges.push_back(axis.get<std::vector<double>>());
  }
  auto radius_edges = j.at("radius_edges").get<std::vector<double>>();
  return std::make_shared<Partition>(dom, std::move(pos_edges),
                                     std::move(radius_edges));
}

}  // namespace

std::shared_ptr<const Partition> partition_from_json(const std::string& text,
                                                     const Domain& dom) {
  return partition_from_json_obj(nlohmann::json::parse(text), dom);
}

std::string measure_to_json(const BinnedMeasure& m, const std::string& config_digest) {
  nlohmann::json j;
  j["partition"] = nlohmann::json::parse(partition_to_json(m.partition()));
  if (!config_digest.empty()) j["config_digest"] = config_digest;
  nlohmann::json cells = nlohmann::json::object();
  for (std::size_t c = 0; c < m.cells(); ++c) {
    if (m[c] != 0.0) cells[std::to_string(c)] = m[c];
  }
  j["cells"] = std::move(cells);
  return j.dump(2);
}

BinnedMeasure measure_from_json(const std::string& text, const Domain& dom) {
  const auto j = nlohmann::json::parse(text);
  auto partition = partition_from_json_obj(j.at("partition"), dom);
  auto m = BinnedMeasure::zero(partition);
  for (const auto& [key, value] : j.at("cells").items()) {
    const std::size_t c = std::stoull(key);
    if (c >= partition->cell_count()) {
      throw std::runtime_error("measure_from_json: cell id out of range");
    }
    m.at(c) = value.get<double>();
  }
  return m;
}

void write_pair_measure_csv(const BinnedPairMeasure& m, std::ostream& os,
                            const std::string& header_comment) {
  if (!header_comment.empty()) os << "# " << header_comment << '\n';
  os << "# partition_digest=" << std::hex << m.partition().digest() << std::dec
     << '\n';
  os << "cell_a,cell_b,mass\n";
  os.precision(17);
  for (std::size_t a = 0; a < m.cells(); ++a) {
    for (std::size_t b = 0; b < m.cells(); ++b) {
      if (m(a, b) != 0.0) os << a << ',' << b << ',' << m(a, b) << '\n';
    }
  }
}

BinnedPairMeasure read_pair_measure_csv(std::istream& is,
                                        std::shared_ptr<const Partition> partition) {
  auto m = BinnedPairMeasure::zero(std::move(partition));
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("cell_a", 0) == 0) continue;  // header
    std::istringstream ls(line);
    std::size_t a, b;
    double mass;
    char comma;
    if (!(ls >> a >> comma >> b >> comma >> mass)) {
      throw std::runtime_error("read_pair_measure_csv: malformed row: " + line);
    }
    if (a >= m.cells() || b >= m.cells()) {
      throw std::runtime_error("read_pair_measure_csv: cell id out of range");
    }
    m.at(a, b) = mass;
  }
  if (!m.is_symmetric()) {
    throw std::runtime_error("read_pair_measure_csv: measure is not symmetric");
  }
  return m;
}

}  // namespace boolnet
