#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochmatch/estimator.hpp"
#include "stochmatch/fractional.hpp"
#include "stochmatch/generators.hpp"

namespace stochmatch {

enum class Algorithm { algorithm1, edcs };

Algorithm parse_algorithm(const std::string& s);
std::string to_string(Algorithm a);

struct ExperimentConfig {
  std::optional<std::string> graph_file;
  std::optional<GeneratorSpec> generator;
  std::uint64_t instances = 1;
  std::vector<double> p_v;
  std::vector<double> p_e;
  std::vector<double> epsilon;
  Algorithm algorithm = Algorithm::algorithm1;
  bool weighted = false;
  std::optional<std::uint64_t> r_cap;
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::size_t workers = 1;
  double confidence = 0.99;
  std::size_t enumeration_budget = kDefaultEnumerationBudget;
  std::optional<std::uint64_t> beta;
  double edcs_C = 128.0;
  QMode q_mode = QMode::automatic;
  std::size_t alpha_grid = kDefaultAlphaGrid;
};

/// JSON config with the keys of ExperimentConfig; graph is
/// {"file": path} or {"generator": {family, n, p, n_left, n_right,
/// weights: {model, lo, hi, rate}, seed}}. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig read_config_file(const std::string& path);

/// Throws InputError on an empty sweep, missing seed or missing graph source.
void validate(const ExperimentConfig& cfg);

/// Resolved config as JSON (the sidecar). Omits `workers`, which never
/// affects results.
std::string config_to_json(const ExperimentConfig& cfg);

struct ExperimentRow {
  std::string graph_id;
  std::size_t n = 0;
  std::size_t m = 0;
  double p_v = 1.0;
  double p_e = 1.0;
  double epsilon = 0.0;
  Algorithm algorithm = Algorithm::algorithm1;
  std::uint64_t r_or_beta = 0;
  EstimateMode q_mode = EstimateMode::exact;
  double ratio = 1.0;
  double ratio_ci = 0.0;
  std::size_t max_deg_q = 0;
  bool checks_passed = true;
  std::vector<std::string> failed_checks;
};

/// One row per (instance, p_v, p_e, epsilon) in config order. Row i uses
/// RngSeed{seed, i}. Rows run on cfg.workers threads; output is identical
/// for any worker count.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

/// Writes cfg.output (CSV) and cfg.output + ".json" (sidecar).
void write_experiment_outputs(const ExperimentConfig& cfg, const std::vector<ExperimentRow>& rows);

}  // namespace stochmatch
