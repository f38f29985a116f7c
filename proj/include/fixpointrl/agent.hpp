#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fixpointrl/hamiltonians.hpp"
#include "fixpointrl/linalg.hpp"
#include "fixpointrl/random_stream.hpp"

namespace fixpointrl::agent {

struct AgentConfig {
  double reward_rate = 0.9;            // r in (0, 1)
  double punishment_rate = 2.0 / 0.9;  // p > 1
  double w_threshold = 0.005;          // convergence when max w < w_threshold
  bool reset_enabled = false;
  double w_reset = 0.01;               // in (w_threshold, 1)
  std::int64_t decay_start = 1200;     // k0: linear decay of w_reset begins after it
  std::int64_t max_iterations = 2000;  // k_max
  double tau_min = 0.0;
  double tau_max = 100.0;
  std::uint64_t seed = 0;
};

/// Throws ConfigError listing every violated bound.
void validate(const AgentConfig& config);

/// Exploration parameters w^{(j,l)}, j < l, stored row-major over pairs
/// (0,1), (0,2), ..., (0,d-1), (1,2), ...: lexicographic order.
class ExplorationTable {
 public:
  ExplorationTable() = default;
  ExplorationTable(Index dim, double value);

  Index dim() const { return dim_; }
  std::size_t pair_count() const { return values_.size(); }
  std::size_t pair_index(Index j, Index l) const;
  double& at(Index j, Index l) { return values_[pair_index(j, l)]; }
  double at(Index j, Index l) const { return values_[pair_index(j, l)]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double max() const;
  void fill(double value);

  friend bool operator==(const ExplorationTable&, const ExplorationTable&) = default;

 private:
  Index dim_ = 0;
  std::vector<double> values_;
};

struct AgentState {
  AgentConfig config;
  ComplexMatrix unitary;  // D_k
  ExplorationTable w;
  std::int64_t k = 1;     // index of the next iteration to run
  RandomStream rng;
  bool converged_once = false;
  std::int64_t reorthonormalizations = 0;
};

enum class PairCase : std::uint8_t { kDoubleReward, kMixed, kDoublePunishment };

struct IterationRecord {
  std::int64_t k = 0;
  std::vector<Index> outcomes;       // m_k^{(j)}
  double w_max = 0.0;                // max w after this iteration's updates
  double tau = 0.0;
  bool reset_triggered = false;
  std::vector<PairCase> pair_cases;  // lexicographic pair order
};

enum class Status { kRunning, kConverged, kResetApplied };

/// D = I, all w = 1, k = 1, stream keyed by config.seed.
AgentState init(Index dim, const AgentConfig& config);

/// Pure w-update rules for one pair; returns w_{k+1} from w_k.
double updated_exploration(PairCase pair_case, double w, double r, double p);

/// Classify pair (j, l), j < l, from the measured outcomes.
PairCase classify_pair(Index j, Index l, const std::vector<Index>& outcomes);

/// One learning iteration against the channel rho -> U(tau) rho U(tau)^dagger
/// of `model.rescaled`.
///
/// Stream consumption order: one draw for tau; one draw per qudit j = 0..d-1
/// for its measurement; then, for each punished pair in lexicographic order,
/// three draws for alpha, beta, gamma. Returns std::nullopt once k > k_max.
std::optional<IterationRecord> iterate(AgentState& state,
                                       const models::HamiltonianModel& model);

/// Convergence test with optional fine-tuning reset.
Status check_convergence(AgentState& state, const AgentConfig& config);

/// Reset value scheduled at iteration k: w_r up to k0, then linear decay to 0 at k_max.
double scheduled_reset_value(const AgentConfig& config, std::int64_t k);

/// Callback run after every iteration (after check_convergence).
using IterationObserver =
    std::function<void(const AgentState&, const IterationRecord&, Status)>;

struct RealizationRun {
  std::vector<IterationRecord> trajectory;
  AgentState final_state;
  bool converged = false;
  std::int64_t iterations = 0;
};

/// Iterate until converged or k_max. Keeps the full trajectory.
RealizationRun run_realization(const models::HamiltonianModel& model,
                               const AgentConfig& config);

/// Same loop without storing records; each record goes to `observer`.
RealizationRun run_realization(const models::HamiltonianModel& model,
                               const AgentConfig& config,
                               const IterationObserver& observer);

}  // namespace fixpointrl::agent
