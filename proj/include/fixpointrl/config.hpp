#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fixpointrl/agent.hpp"
#include "fixpointrl/hamiltonians.hpp"

namespace fixpointrl::experiments {

/// Every tunable of one experiment. Keys of the text form equal the CLI flag
/// names without the leading dashes.
struct ExperimentConfig {
  std::string preset;  // informational; empty for explicit runs
  models::ModelKind model = models::ModelKind::kRandom;
  int qubits = 2;
  double j_over_h = 1.0;
  double k_over_h = 0.5;
  double g_over_de = 1.0;

  double reward_rate = 0.9;
  std::optional<double> punishment_rate;  // unset: 2 / r
  double w_threshold = 0.005;
  double w_reset = 0.01;
  double tau_min = 0.0;
  double tau_max = 100.0;
  bool reset_enabled = true;
  std::optional<std::int64_t> max_iterations;  // unset: per-model budget
  std::optional<std::int64_t> decay_start;     // unset: 60% of k_max

  int realizations = 1;
  std::optional<int> sector;        // Hamming weight of a sector-restricted run
  std::optional<double> sigma_th;   // post-selection threshold
  std::filesystem::path output_dir = "results";
  std::uint64_t master_seed = 42;
  bool emit_plots = false;
  int workers = 0;                  // 0: hardware concurrency; never affects outputs

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Ordered key list of the text form.
const std::vector<std::string>& config_keys();

/// Apply one `key = value` assignment. Throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Apply an override of the form `key=value`.
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Flat `key = value` document, one pair per line, `#` comments.
std::string to_text(const ExperimentConfig& config);
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Key/value view used for metadata echo (same strings as to_text).
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

/// Named parameter sets of the reference experiments.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);
/// fig7 presets drive the Hamming-sector suite.
bool preset_is_sector_suite(const std::string& name);

/// Iteration budget used when max_iterations is unset.
std::int64_t default_iteration_budget(models::ModelKind model, int qubits, bool sector_restricted);

/// Throws ConfigError listing violated bounds.
void validate(const ExperimentConfig& config);

/// Agent parameters with every default resolved (seed left at 0).
agent::AgentConfig resolve_agent_config(const ExperimentConfig& config);

}  // namespace fixpointrl::experiments
