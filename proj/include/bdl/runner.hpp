#pragma once

// Config-driven verification runs: check registry, execution and reports.

#include "bdl/models.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdl {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { periodic, maba, degenerate };

struct ExperimentConfig {
  ModelKind kind = ModelKind::periodic;
  std::string model_type;
  ChainSpec spec;
  std::optional<TwistSpec> twist;
  std::vector<std::string> suite;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 1;
  std::size_t trials = 5;
  std::map<std::string, double> tolerances;
  std::string output_path;
  std::string format = "json";
  nlohmann::json echo;
};

/// Named tolerances and their defaults.
const std::map<std::string, double>& default_tolerances();

/// Validates and converts; throws ConfigError with a readable reason.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct CheckInfo {
  std::string name;
  std::string summary;
  std::string refs;
  std::vector<ModelKind> models;
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& name);
std::string list_checks();
/// Throws std::invalid_argument for unknown names.
std::string explain(const std::string& name);

struct CheckRecord {
  std::string name;
  std::string status;  // pass, fail, skipped
  std::size_t instances = 0;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;
  std::vector<std::string> notes;
  std::string digest;
  double wall_ms = 0.0;
};

struct RunReport {
  std::vector<CheckRecord> checks;
  std::size_t passed = 0, failed = 0, skipped = 0;
  nlohmann::json config;

  bool ok() const { return failed == 0; }
};

RunReport run(const ExperimentConfig& config);

nlohmann::json to_json(const RunReport& report, bool include_timing = true);
std::string to_csv(const RunReport& report);

}  // namespace bdl
