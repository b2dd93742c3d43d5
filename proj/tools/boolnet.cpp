// boolnet CLI: simulate Boolean networks over marked Poisson point
// processes, compute empirical measures, evaluate rate functions, and run
// the verification experiments. Exit codes: 0 success, 1 verdict failure,
// 2 configuration error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <cmath>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "boolnet/config.hpp"
#include "boolnet/harness.hpp"
#include "boolnet/math_util.hpp"
#include "boolnet/measures.hpp"
#include "boolnet/network.hpp"
#include "boolnet/oracle.hpp"
#include "boolnet/rates.hpp"
#include "boolnet/rng.hpp"
#include "boolnet/sampler.hpp"

namespace fs = std::filesystem;
using namespace boolnet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFail = 1;
constexpr int kExitConfigError = 2;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // section.key=value
  std::string out_dir_override;
  bool deterministic = false;
  double lambda_override = -1.0;
  std::int64_t seed_override = -1;
  std::int64_t replicas_override = -1;
  int workers_override = -1;
  std::string mode_override;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "Experiment config file")
      ->required();
  cmd->add_option("--set", args.overrides,
                  "Override a config key, e.g. --set regime.lambda=200");
  cmd->add_option("--out-dir", args.out_dir_override, "Output directory");
  cmd->add_option("--lambda", args.lambda_override, "Override regime.lambda");
  cmd->add_option("--seed", args.seed_override, "Override run.seed");
  cmd->add_option("--replicas", args.replicas_override, "Override run.replicas");
  cmd->add_option("--workers", args.workers_override, "Override run.workers");
  cmd->add_option("--mode", args.mode_override, "Override run.mode (hard|soft)");
  cmd->add_flag("--deterministic", args.deterministic,
                "Suppress timestamps so outputs are byte-stable");
}

ExperimentConfig load(const CommonArgs& args) {
  ConfigFile file = ConfigFile::parse_file(args.config_path);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects section.key=value, got '" + kv + "'");
    }
    file.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.lambda_override >= 0.0) {
    file.set("regime.lambda", std::to_string(args.lambda_override));
  }
  if (args.seed_override >= 0) {
    file.set("run.seed", std::to_string(args.seed_override));
  }
  if (args.replicas_override >= 0) {
    file.set("run.replicas", std::to_string(args.replicas_override));
  }
  if (args.workers_override >= 0) {
    file.set("run.workers", std::to_string(args.workers_override));
  }
  if (!args.mode_override.empty()) {
    file.set("run.mode", "\"" + args.mode_override + "\"");
  }
  if (!args.out_dir_override.empty()) {
    file.set("output.directory", "\"" + args.out_dir_override + "\"");
  }
  return load_experiment_config(file);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << contents;
}

fs::path prepare_out_dir(const ExperimentConfig& cfg) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json base_summary(const ExperimentConfig& cfg, bool deterministic) {
  nlohmann::json j;
  j["config_digest"] = cfg.digest_hex;
  if (!deterministic) {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["generated_at"] = buf;
  }
  return j;
}

int run_simulate(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  const fs::path dir = prepare_out_dir(cfg);

  const auto config =
      sample_marked_ppp(cfg.regime, cfg.domain, derive_seed(cfg.seed, 0));
  const BooleanNetwork net =
      cfg.mode == NetworkMode::hard
          ? build_hard(config, cfg.domain)
          : build_soft(config, cfg.regime, derive_seed(cfg.seed, 1));

  {
    std::ofstream os(dir / "points.txt");
    write_points_text(config, os, "config_digest=" + cfg.digest_hex);
  }
  {
    auto j = nlohmann::json::parse(points_to_json(config));
    j["config_digest"] = cfg.digest_hex;
    write_file(dir / "points.json", j.dump(2));
  }
  {
    std::ofstream os(dir / "edges.csv");
    write_edges_csv(net, os, "config_digest=" + cfg.digest_hex);
  }
  auto summary = base_summary(cfg, args.deterministic);
  summary["points"] = config.size();
  summary["edges"] = net.edges.size();
  summary["mode"] = cfg.mode == NetworkMode::hard ? "hard" : "soft";
  summary["clamped_pairs"] = net.clamped_pairs;
  write_file(dir / "summary.json", summary.dump(2));
  std::cout << "simulate: " << config.size() << " points, " << net.edges.size()
            << " edges -> " << dir.string() << '\n';
  return kExitOk;
}

int run_measures(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  const fs::path dir = prepare_out_dir(cfg);

  const auto config =
      sample_marked_ppp(cfg.regime, cfg.domain, derive_seed(cfg.seed, 0));
  const BooleanNetwork net =
      cfg.mode == NetworkMode::hard
          ? build_hard(config, cfg.domain)
          : build_soft(config, cfg.regime, derive_seed(cfg.seed, 1));

  const auto l1 = empirical_mark_measure(net, cfg.partition);
  const auto l2 = empirical_connectivity_measure(net, cfg.partition);
  const auto ref = reference_measure(cfg.regime, cfg.partition);

  write_file(dir / "l1.json", measure_to_json(l1, cfg.digest_hex));
  write_file(dir / "reference.json", measure_to_json(ref, cfg.digest_hex));
  {
    std::ofstream os(dir / "l2.csv");
    write_pair_measure_csv(l2, os, "config_digest=" + cfg.digest_hex);
  }
  auto summary = base_summary(cfg, args.deterministic);
  summary["l1_total_mass"] = l1.total_mass();
  summary["l2_total_mass"] = l2.total_mass();
  summary["points"] = config.size();
  summary["edges"] = net.edges.size();
  write_file(dir / "summary.json", summary.dump(2));
  std::cout << "measures: ||L1|| = " << l1.total_mass()
            << ", ||L2|| = " << l2.total_mass() << " -> " << dir.string() << '\n';
  return kExitOk;
}

int run_rate(const CommonArgs& args, const std::string& omega_path,
             const std::string& pi_path) {
  const ExperimentConfig cfg = load(args);
  const fs::path dir = prepare_out_dir(cfg);

  std::ifstream in(omega_path);
  if (!in) throw ConfigError("rate: cannot open measure file " + omega_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const BinnedMeasure omega = measure_from_json(buf.str(), cfg.domain);
  const BinnedMeasure ref = reference_measure(cfg.regime, omega.partition_ptr());

  auto summary = base_summary(cfg, args.deterministic);
  {
    std::ostringstream digest;
    digest << std::hex << fnv1a64(buf.str());
    summary["inputs_digest"] = digest.str();
  }

  auto rate_json = [](double value) -> nlohmann::json {
    if (std::isinf(value)) return "infinity";
    return value;
  };
  const RateValue i1 = mark_rate(omega, ref);
  summary["mark_rate"] = rate_json(i1.value);

  if (!pi_path.empty()) {
    std::ifstream pin(pi_path);
    if (!pin) throw ConfigError("rate: cannot open pair measure file " + pi_path);
    const BinnedPairMeasure pi = read_pair_measure_csv(pin, omega.partition_ptr());
    const RateValue cond =
        conditional_rate(pi, omega, cfg.regime, cfg.kernel_subdivisions);
    const RateValue joint =
        joint_rate(omega, pi, ref, cfg.regime, cfg.kernel_subdivisions);
    summary["conditional_rate"] = rate_json(cond.value);
    summary["joint_rate"] = rate_json(joint.value);
    if (joint.decomposition) {
      summary["decomposition"] = {
          {"mark_term", joint.decomposition->mark_term},
          {"conditional_term", joint.decomposition->conditional_term},
          {"pair_entropy", joint.decomposition->pair_entropy},
          {"reference_pair_mass", joint.decomposition->reference_pair_mass},
          {"pair_mass", joint.decomposition->pair_mass}};
    }
  }
  summary["kernel_average"] = cfg.kernel_subdivisions <= 1
                                  ? "midpoint"
                                  : "subgrid-" + std::to_string(cfg.kernel_subdivisions);
  write_file(dir / "rate.json", summary.dump(2));
  std::cout << "rate: I1 = " << i1.value << " -> " << (dir / "rate.json").string()
            << '\n';
  return kExitOk;
}

int run_ldp_verify(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  if (!cfg.event) throw ConfigError("ldp-verify: [event] section required");
  if (cfg.lambda_grid.empty()) {
    throw ConfigError("ldp-verify: sweep.lambda_grid required");
  }
  const fs::path dir = prepare_out_dir(cfg);

  const SweepResult result =
      ldp_slope(cfg.regime, cfg.partition, cfg.mode, *cfg.event, cfg.lambda_grid,
                cfg.replicas_per_lambda, cfg.seed, cfg.slope_tolerance,
                cfg.workers);
  {
    std::ofstream os(dir / "sweep.csv");
    write_sweep_csv(result, os, "config_digest=" + cfg.digest_hex);
  }
  write_file(dir / "summary.json",
             sweep_summary_json(result, cfg.digest_hex, !args.deterministic));
  std::cout << "ldp-verify: slope = " << result.slope
            << ", predicted = " << -result.predicted_rate << " ["
            << result.verdict << "]\n";
  return result.verdict == "PASS" ? kExitOk : kExitVerdictFail;
}

int run_mean_degree(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  if (cfg.lambda_grid.empty()) {
    throw ConfigError("mean-degree: sweep.lambda_grid required");
  }
  const fs::path dir = prepare_out_dir(cfg);
  const MeanDegreeResult result =
      mean_degree_check(cfg.regime, cfg.lambda_grid, cfg.replicas, cfg.seed,
                        cfg.mean_degree_tolerance, cfg.workers);
  {
    std::ofstream os(dir / "mean_degree.csv");
    write_mean_degree_csv(result, os, "config_digest=" + cfg.digest_hex);
  }
  write_file(dir / "summary.json",
             mean_degree_summary_json(result, cfg.digest_hex, !args.deterministic));
  std::cout << "mean-degree: final = " << result.points.back().mean
            << ", target = " << result.target << " [" << result.verdict << "]\n";
  return result.verdict == "PASS" ? kExitOk : kExitVerdictFail;
}

// Monte Carlo frequencies versus the exact cell-count and edge-count laws.
int run_oracle_check(const CommonArgs& args) {
  const ExperimentConfig cfg = load(args);
  const fs::path dir = prepare_out_dir(cfg);
  const double lambda = cfg.regime.lambda();

  // Cell counts: joint histogram over replicas vs the product-Poisson law.
  const auto law = cell_law(cfg.regime, cfg.partition);
  const std::size_t cells = cfg.partition->cell_count();
  if (cells > 3) {
    throw ConfigError("oracle-check: use at most 3 cells (joint histogram)");
  }
  std::map<std::vector<std::uint64_t>, std::uint64_t> histogram;
  for (std::uint64_t r = 0; r < cfg.replicas; ++r) {
    const auto config = sample_marked_ppp(cfg.regime, cfg.domain,
                                          derive_seed(derive_seed(cfg.seed, r), 0));
    BooleanNetwork net;
    net.config = config;
    const auto l1 = empirical_mark_measure(net, cfg.partition);
    std::vector<std::uint64_t> counts(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      counts[c] = static_cast<std::uint64_t>(std::llround(l1[c] * lambda));
    }
    ++histogram[counts];
  }
  double tv_cells = 0.0;
  {
    // Accumulate |p_hat - p| over observed states, then add the exact mass
    // of unobserved ones via the complement.
    double observed_exact = 0.0;
    for (const auto& [counts, freq] : histogram) {
      double log_p = 0.0;
      for (std::size_t c = 0; c < cells; ++c) {
        const double m = law.means[c];
        log_p += -m + (counts[c] > 0 ? static_cast<double>(counts[c]) * std::log(m)
                                     : 0.0) -
                 log_factorial(counts[c]);
      }
      const double p = std::exp(log_p);
      observed_exact += p;
      tv_cells +=
          std::abs(static_cast<double>(freq) / static_cast<double>(cfg.replicas) - p);
    }
    tv_cells = 0.5 * (tv_cells + (1.0 - observed_exact));
  }

  // Edge counts: fixed point count n, constant-kernel soft graphs vs the
  // binomial pmf.
  const std::uint64_t edge_replicas = cfg.replicas;
  const int n_points = static_cast<int>(std::min<double>(8.0, std::max(2.0, lambda)));
  MarkedConfiguration fixed;
  fixed.dim = cfg.domain.dim();
  fixed.lambda = lambda;
  fixed.seed = cfg.seed;
  {
    Rng rng(derive_seed(cfg.seed, 777));
    for (int i = 0; i < n_points; ++i) {
      for (int a = 0; a < fixed.dim; ++a) {
        fixed.positions.push_back(rng.uniform(cfg.domain.lower(a), cfg.domain.upper(a)));
      }
      fixed.radii.push_back(cfg.regime.mark_law().quantile(rng.uniform()));
    }
  }
  // The binomial comparison needs one edge probability across all pairs.
  if (!std::holds_alternative<ConstantKernel>(cfg.regime.kernel_spec())) {
    throw ConfigError(
        "oracle-check: the edge-count comparison requires regime.kernel = "
        "\"constant\"");
  }
  const std::uint64_t n_pairs =
      static_cast<std::uint64_t>(n_points) * (n_points - 1) / 2;
  const Ball probe = fixed.ball(0);
  const double p_edge =
      edge_probability_at_lambda(kernel_limit(probe, probe, cfg.regime), lambda);
  std::vector<std::uint64_t> edge_hist(n_pairs + 1, 0);
  for (std::uint64_t r = 0; r < edge_replicas; ++r) {
    const auto net = build_soft(fixed, cfg.regime, derive_seed(cfg.seed, 9000 + r));
    ++edge_hist[net.edges.size()];
  }
  double tv_edges = 0.0;
  for (std::uint64_t k = 0; k <= n_pairs; ++k) {
    const double p = binomial_edge_pmf(k, n_pairs, p_edge);
    tv_edges += std::abs(
        static_cast<double>(edge_hist[k]) / static_cast<double>(edge_replicas) - p);
  }
  tv_edges *= 0.5;

  const double tolerance = 0.02;
  const bool pass = tv_cells < tolerance && tv_edges < tolerance;
  auto summary = base_summary(cfg, args.deterministic);
  summary["cell_count_tv"] = tv_cells;
  summary["edge_count_tv"] = tv_edges;
  summary["edge_probability"] = p_edge;
  summary["fixed_points"] = n_points;
  summary["replicas"] = cfg.replicas;
  summary["tolerance"] = tolerance;
  summary["verdict"] = pass ? "PASS" : "FAIL";
  write_file(dir / "oracle_check.json", summary.dump(2));
  std::cout << "oracle-check: cell TV = " << tv_cells << ", edge TV = " << tv_edges
            << " [" << (pass ? "PASS" : "FAIL") << "]\n";
  return pass ? kExitOk : kExitVerdictFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean network simulator and large-deviation analysis toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string omega_path, pi_path;

  CLI::App* simulate = app.add_subcommand("simulate", "Sample a configuration and build the network");
  add_common(simulate, args);
  CLI::App* measures = app.add_subcommand("measures", "Compute and dump L1/L2 and the reference measure");
  add_common(measures, args);
  CLI::App* rate = app.add_subcommand("rate", "Evaluate rate functions on measure files");
  add_common(rate, args);
  rate->add_option("--omega", omega_path, "Mark measure JSON file")->required();
  rate->add_option("--pi", pi_path, "Pair measure CSV file");
  CLI::App* ldp = app.add_subcommand("ldp-verify", "Lambda-sweep slope vs rate-function prediction");
  add_common(ldp, args);
  CLI::App* mean_deg = app.add_subcommand("mean-degree", "Mean-degree limit check");
  add_common(mean_deg, args);
  CLI::App* oracle = app.add_subcommand("oracle-check", "Monte Carlo vs exact small-instance laws");
  add_common(oracle, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(args);
    if (measures->parsed()) return run_measures(args);
    if (rate->parsed()) return run_rate(args, omega_path, pi_path);
    if (ldp->parsed()) return run_ldp_verify(args);
    if (mean_deg->parsed()) return run_mean_degree(args);
    if (oracle->parsed()) return run_oracle_check(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}
