#include "boolnet/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "boolnet/math_util.hpp"

namespace boolnet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Strips an unquoted # comment.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

ConfigValue parse_value(const std::string& raw, const std::string& where) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError(where + ": empty value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') {
      throw ConfigError(where + ": unterminated string");
    }
    return v.substr(1, v.size() - 2);
  }
  if (v.front() == '[') {
    if (v.back() != ']') throw ConfigError(where + ": unterminated array");
    std::vector<double> out;
    std::string inner = v.substr(1, v.size() - 2);
    std::istringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(t, &pos));
        if (pos != t.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ConfigError(where + ": expected number in array, got '" + t + "'");
      }
    }
    return out;
  }
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  // Bare words are accepted as strings (handy for CLI overrides).
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile file;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": bad section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    const std::string dotted = section.empty() ? key : section + "." + key;
    file.values_[dotted] = parse_value(line.substr(eq + 1), dotted);
  }
  return file;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

void ConfigFile::set(const std::string& dotted_key, const std::string& raw_value) {
  if (dotted_key.empty()) throw ConfigError("override: empty key");
  values_[dotted_key] = parse_value(raw_value, dotted_key);
}

const ConfigValue* ConfigFile::find(const std::string& dotted_key) const {
  auto it = values_.find(dotted_key);
  return it == values_.end() ? nullptr : &it->second;
}

bool ConfigFile::has(const std::string& dotted_key) const {
  return find(dotted_key) != nullptr;
}

double ConfigFile::number(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) throw ConfigError(key + ": missing required number");
  if (const auto* d = std::get_if<double>(v)) return *d;
  throw ConfigError(key + ": expected a number");
}

double ConfigFile::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::int64_t ConfigFile::integer(const std::string& key) const {
  const double d = number(key);
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-9 * std::max(1.0, std::abs(d))) {
    throw ConfigError(key + ": expected an integer");
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t ConfigFile::integer_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string ConfigFile::text(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) throw ConfigError(key + ": missing required string");
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  throw ConfigError(key + ": expected a string");
}

std::string ConfigFile::text_or(const std::string& key, std::string fallback) const {
  return has(key) ? text(key) : fallback;
}

bool ConfigFile::boolean_or(const std::string& key, bool fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (const auto* b = std::get_if<bool>(v)) return *b;
  throw ConfigError(key + ": expected true or false");
}

std::vector<double> ConfigFile::numbers(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) throw ConfigError(key + ": missing required array");
  if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
  if (const auto* d = std::get_if<double>(v)) return {*d};
  throw ConfigError(key + ": expected a number array");
}

std::vector<double> ConfigFile::numbers_or(const std::string& key,
                                           std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

std::string ConfigFile::canonical() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [key, value] : values_) {
    os << key << '=';
    if (const auto* d = std::get_if<double>(&value)) {
      os << *d;
    } else if (const auto* b = std::get_if<bool>(&value)) {
      os << (*b ? "true" : "false");
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      os << '"' << *s << '"';
    } else {
      const auto& a = std::get<std::vector<double>>(value);
      os << '[';
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) os << ',';
        os << a[i];
      }
      os << ']';
    }
    os << '\n';
  }
  return os.str();
}

std::string ConfigFile::digest_hex() const {
  std::ostringstream os;
  os << std::hex << fnv1a64(canonical());
  return os.str();
}

namespace {

MarkLaw mark_law_from(const ConfigFile& f) {
  const std::string kind = f.text_or("regime.mark_law", "uniform");
  const double r_min = f.number_or("regime.r_min", 0.05);
  const double r_max = f.number_or("regime.r_max", 0.15);
  try {
    if (kind == "uniform") return MarkLaw::uniform(r_min, r_max);
    if (kind == "delta") return MarkLaw::point_mass(f.number("regime.mark_r"));
    if (kind == "power") {
      return MarkLaw::power(f.number("regime.mark_exponent"), r_min, r_max);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("regime.mark_law: ") + e.what());
  }
  throw ConfigError("regime.mark_law: unknown law '" + kind +
                    "' (uniform | delta | power)");
}

KernelSpec kernel_from(const ConfigFile& f, const Domain& dom) {
  const std::string kind = f.text_or("regime.kernel", "corollary");
  if (kind == "corollary") {
    CorollaryKernel k;
    k.vol_domain = f.number_or("regime.kernel_vol_domain", dom.volume());
    return k;
  }
  if (kind == "constant") {
    ConstantKernel k;
    k.value = f.number("regime.kernel_constant");
    if (k.value < 0.0) throw ConfigError("regime.kernel_constant: must be >= 0");
    return k;
  }
  throw ConfigError("regime.kernel: unknown kernel '" + kind +
                    "' (corollary | constant)");
}

std::shared_ptr<const Partition> partition_from(const ConfigFile& f,
                                                const Domain& dom,
                                                const MarkLaw& law) {
  const double r_min = f.number_or("partition.r_min", law.r_min());
  const double r_max =
      f.number_or("partition.r_max", std::max(law.r_max(), law.r_min() + 1e-9));
  std::vector<std::vector<double>> pos_edges(dom.dim());
  bool any_explicit = false;
  for (int a = 0; a < dom.dim(); ++a) {
    const std::string key = "partition.axis" + std::to_string(a) + "_edges";
    if (f.has(key)) {
      pos_edges[a] = f.numbers(key);
      any_explicit = true;
    }
  }
  std::vector<double> bins =
      f.numbers_or("partition.position_bins", std::vector<double>{});
  if (bins.size() == 1 && dom.dim() > 1) {
    bins.assign(dom.dim(), bins[0]);
  }
  for (int a = 0; a < dom.dim(); ++a) {
    if (!pos_edges[a].empty()) continue;
    const int n = bins.empty() ? 1 : static_cast<int>(bins[a]);
    if (n < 1) throw ConfigError("partition.position_bins: bins must be >= 1");
    pos_edges[a].resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      pos_edges[a][i] = dom.lower(a) + dom.side(a) * static_cast<double>(i) / n;
    }
  }
  (void)any_explicit;
  std::vector<double> r_edges;
  if (f.has("partition.radius_edges")) {
    r_edges = f.numbers("partition.radius_edges");
  } else {
    const int nr = static_cast<int>(f.integer_or("partition.radius_bins", 1));
    if (nr < 1) throw ConfigError("partition.radius_bins: must be >= 1");
    r_edges.resize(nr + 1);
    for (int i = 0; i <= nr; ++i) {
      r_edges[i] = r_min + (r_max - r_min) * static_cast<double>(i) / nr;
    }
  }
  try {
    return std::make_shared<Partition>(dom, std::move(pos_edges), std::move(r_edges));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("partition: ") + e.what());
  }
}

EventSpec event_from(const ConfigFile& f) {
  const std::string type = f.text("event.type");
  EventSpec spec;
  spec.use_cell_law = f.boolean_or("event.use_cell_law", true);
  const double threshold = f.number("event.threshold");
  if (type == "mark_cell") {
    MarkCellConstraint c;
    c.cell = static_cast<std::size_t>(f.integer_or("event.cell", 0));
    c.threshold = threshold;
    spec.constraint = c;
  } else if (type == "pair_cell") {
    PairCellConstraint c;
    c.cell_a = static_cast<std::size_t>(f.integer_or("event.cell_a", 0));
    c.cell_b = static_cast<std::size_t>(f.integer_or("event.cell_b", 0));
    c.threshold = threshold;
    spec.constraint = c;
  } else if (type == "pair_total") {
    PairTotalConstraint c;
    c.threshold = threshold;
    spec.constraint = c;
  } else {
    throw ConfigError("event.type: unknown type '" + type +
                      "' (mark_cell | pair_cell | pair_total)");
  }
  return spec;
}

}  // namespace

ExperimentConfig load_experiment_config(const ConfigFile& f) {
  const int dim = static_cast<int>(f.integer_or("domain.dim", 3));
  if (dim < 1 || dim > 8) throw ConfigError("domain.dim: must be in [1, 8]");
  const double side = f.number_or("domain.side", 1.0);
  if (!(side > 0.0)) throw ConfigError("domain.side: must be > 0");
  const std::string topo = f.text_or("domain.topology", "bounded");
  if (topo != "bounded" && topo != "periodic") {
    throw ConfigError("domain.topology: expected bounded | periodic");
  }
  Domain dom = Domain::box(
      dim, side, topo == "periodic" ? Topology::periodic : Topology::bounded);

  std::vector<double> grid = f.numbers_or("sweep.lambda_grid", {});
  double lambda;
  if (f.has("regime.lambda")) {
    lambda = f.number("regime.lambda");
  } else if (!grid.empty()) {
    lambda = grid.front();
  } else {
    throw ConfigError("regime.lambda: missing (set it or sweep.lambda_grid)");
  }
  if (lambda < 0.0) throw ConfigError("regime.lambda: must be >= 0");
  for (double g : grid) {
    if (!(g > 0.0)) throw ConfigError("sweep.lambda_grid: entries must be > 0");
  }

  MarkLaw law = mark_law_from(f);
  KernelSpec kernel = kernel_from(f, dom);

  if (!f.has("run.seed")) {
    throw ConfigError("run.seed: required (no wall-clock seeding)");
  }

  ExperimentConfig cfg{
      dom,
      ScalingRegime(lambda, dom, law, kernel),
      partition_from(f, dom, law),
      NetworkMode::hard,
      static_cast<std::uint64_t>(f.integer_or("run.replicas", 1000)),
      static_cast<std::uint64_t>(f.integer("run.seed")),
      static_cast<int>(f.integer_or("run.workers", 0)),
      f.text_or("output.directory", "out"),
      grid,
      {},
      f.number_or("sweep.slope_tolerance", 0.10),
      f.number_or("sweep.mean_degree_tolerance", 0.05),
      f.number_or("run.bennett_a", 1.0),
      static_cast<int>(f.integer_or("run.kernel_subdivisions", 1)),
      std::nullopt,
      f.digest_hex()};

  const std::string mode = f.text_or("run.mode", "hard");
  if (mode == "hard") {
    cfg.mode = NetworkMode::hard;
  } else if (mode == "soft") {
    cfg.mode = NetworkMode::soft;
  } else {
    throw ConfigError("run.mode: expected hard | soft");
  }

  std::vector<double> budgets = f.numbers_or("sweep.replicas_per_lambda", {});
  if (!budgets.empty()) {
    if (budgets.size() != grid.size()) {
      throw ConfigError(
          "sweep.replicas_per_lambda: length must match sweep.lambda_grid");
    }
    for (double b : budgets) {
      if (!(b >= 1.0)) {
        throw ConfigError("sweep.replicas_per_lambda: entries must be >= 1");
      }
      cfg.replicas_per_lambda.push_back(static_cast<std::uint64_t>(b));
    }
  } else {
    cfg.replicas_per_lambda.assign(grid.size(), cfg.replicas);
  }

  if (f.has("event.type")) cfg.event = event_from(f);

  if (cfg.replicas < 1) throw ConfigError("run.replicas: must be >= 1");
  if (!(cfg.slope_tolerance > 0.0)) {
    throw ConfigError("sweep.slope_tolerance: must be > 0");
  }
  return cfg;
}

}  // namespace boolnet
