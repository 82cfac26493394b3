#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csf/report.hpp"
#include "csf/trajectory.hpp"

// Batch experiment runner behind the CLI and the acceptance suite: named
// built-in configs (one per acceptance criterion), config validation, and
// deterministic artifact output.

namespace csf::experiments {

struct RunContext {
  std::filesystem::path out_dir;
  double tol_scale = 1.0;
  int jobs = 1;
  // In-process cache so suites sharing expensive runs (local-GCSF fleet,
  // spike family) only compute them once.
  std::map<std::string, std::shared_ptr<const std::vector<Trajectory>>> cache;
};

struct ExperimentResult {
  std::string name;
  bool passed = false;
  std::vector<EstimateReport> reports;
  std::vector<std::string> artifacts;  // paths relative to out_dir
  std::string detail;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BuiltIn {
  std::string name;
  std::string kind;
  std::string criterion;  // one-line description used by `list`
};

const std::vector<BuiltIn>& builtins();

// Resolve a name or a JSON file path to a validated config.
nlohmann::json load_config(const std::string& name_or_path);

ExperimentResult run_experiment(const nlohmann::json& config, RunContext& ctx);

// Runs a list of configs (jobs-way parallel), writes summary.json, returns
// overall pass.
bool run_all(const std::vector<nlohmann::json>& configs, RunContext& ctx);

}  // namespace csf::experiments
