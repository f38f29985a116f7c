#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixpointrl/agent.hpp"
#include "fixpointrl/config.hpp"
#include "fixpointrl/hamiltonians.hpp"
#include "fixpointrl/metrics.hpp"

namespace fixpointrl::experiments {

inline constexpr const char* kMetadataFormat = "fixpointrl-metadata v1";

/// Thresholds of the sigma_th distance sweep (the requested threshold is added).
const std::vector<double>& default_sweep_thresholds();

/// One learning run plus its fidelity trajectory and final-state diagnostics.
metrics::RealizationResult simulate_realization(const models::HamiltonianModel& model,
                                                const agent::AgentConfig& config,
                                                std::int64_t index);

struct RealizationFailure {
  std::int64_t index = 0;
  std::string message;
};

struct ExperimentOutcome {
  metrics::AggregateResult aggregate;
  /// Per realization, trajectories dropped after aggregation.
  std::vector<metrics::RealizationResult> results;
  std::vector<RealizationFailure> failures;
  std::int64_t requested = 0;
  /// Spectrum of the fixed model (empty for random models).
  RealVector exact_energies;
  int exit_status() const;
};

/// Build the model of a non-random run (optionally sector-restricted).
models::HamiltonianModel build_fixed_model(const ExperimentConfig& config);

/// Fan realizations out over `workers` threads and fold them in index order.
/// Output is independent of the worker count.
ExperimentOutcome run_realizations(const ExperimentConfig& config, std::ostream* progress = nullptr);

/// Full experiment: run, then write CSVs, config.txt and metadata.json into
/// config.output_dir (plus post-selection tables and SVGs when requested).
ExperimentOutcome execute_experiment(const ExperimentConfig& config, std::ostream* progress = nullptr);
int run_experiment(const ExperimentConfig& config, std::ostream* progress = nullptr);

struct SectorRun {
  int weight = 0;
  Index dim = 0;
  bool exact = false;  // dimension-1 sector, no learning
  double f_max = 1.0;
  double f_min = 1.0;
  int exit_status = 0;
};

struct SectorSuiteOutcome {
  std::vector<SectorRun> sectors;
  RealVector full_energies;    // rescaled full-space spectrum
  RealVector sector_energies;  // union of all sector spectra, mapped to full-space units, sorted
  std::vector<metrics::SelectedState> combined;  // state_index = full basis index
  int exit_status() const;
};

/// RL independently inside every Hamming-weight sector of a pairing model.
SectorSuiteOutcome execute_sector_suite(const ExperimentConfig& config, std::ostream* progress = nullptr);
int run_sector_suite(const ExperimentConfig& config, std::ostream* progress = nullptr);

struct PostSelectReport {
  std::vector<metrics::SelectedState> all;
  std::vector<metrics::SelectedState> selected;
  metrics::DistanceStats selected_stats;
  metrics::DistanceStats unselected_stats;  // every state, no threshold
  std::vector<metrics::DistanceStats> sweep;
};

/// Reads energies.csv + spectrum.csv, writes selected.csv + distance_sweep.csv.
PostSelectReport post_select_report(const std::filesystem::path& results_dir, double sigma_th);

/// Writes fidelity.svg, exploration.svg, energies.svg and sigma.svg for a
/// completed run. Throws IoError("no data ...") before writing anything when
/// the run has no rows.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& results_dir,
                                              std::optional<double> sigma_th = std::nullopt);

}  // namespace fixpointrl::experiments
