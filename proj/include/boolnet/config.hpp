// Experiment configuration: a TOML-style sectioned key-value file with
// CLI flag overrides. Values are numbers, quoted strings, booleans, or
// number arrays. Parse errors carry the section.key path.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "boolnet/harness.hpp"
#include "boolnet/model.hpp"
#include "boolnet/network.hpp"
#include "boolnet/partition.hpp"

namespace boolnet {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>>;

class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  // Override entry, "section.key" plus a raw value token ("0.5", "\"soft\"",
  // "soft", "[1, 2]", "true").
  void set(const std::string& dotted_key, const std::string& raw_value);

  bool has(const std::string& dotted_key) const;

  double number(const std::string& dotted_key) const;
  double number_or(const std::string& dotted_key, double fallback) const;
  std::int64_t integer(const std::string& dotted_key) const;
  std::int64_t integer_or(const std::string& dotted_key, std::int64_t fallback) const;
  std::string text(const std::string& dotted_key) const;
  std::string text_or(const std::string& dotted_key, std::string fallback) const;
  bool boolean_or(const std::string& dotted_key, bool fallback) const;
  std::vector<double> numbers(const std::string& dotted_key) const;
  std::vector<double> numbers_or(const std::string& dotted_key,
                                 std::vector<double> fallback) const;

  // Sorted, normalized serialization; input to the config digest.
  std::string canonical() const;
  std::string digest_hex() const;

 private:
  const ConfigValue* find(const std::string& dotted_key) const;

  std::map<std::string, ConfigValue> values_;
};

struct ExperimentConfig {
  Domain domain;
  ScalingRegime regime;  // at the scalar lambda (or the first grid value)
  std::shared_ptr<const Partition> partition;
  NetworkMode mode = NetworkMode::hard;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string output_dir;

  std::vector<double> lambda_grid;
  std::vector<std::uint64_t> replicas_per_lambda;
  double slope_tolerance = 0.10;
  double mean_degree_tolerance = 0.05;
  double bennett_a = 1.0;
  int kernel_subdivisions = 1;

  std::optional<EventSpec> event;

  std::string digest_hex;
};

// Validates and assembles the experiment from a parsed config; throws
// ConfigError with the offending key path.
ExperimentConfig load_experiment_config(const ConfigFile& file);

}  // namespace boolnet
