#include "fixpointrl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fixpointrl/errors.hpp"
#include "fixpointrl/quantum.hpp"
#include "fixpointrl/tolerances.hpp"

namespace fixpointrl::agent {

void validate(const AgentConfig& c) {
  std::vector<std::string> violations;
  if (!(c.reward_rate > 0.0 && c.reward_rate < 1.0)) violations.push_back("0 < r < 1");
  if (!(c.punishment_rate > 1.0)) violations.push_back("p > 1");
  if (!(c.w_threshold > 0.0 && c.w_threshold < c.w_reset && c.w_reset < 1.0)) {
    violations.push_back("0 < w_th < w_r < 1");
  }
  if (!(c.tau_min >= 0.0 && c.tau_min < c.tau_max && std::isfinite(c.tau_max))) {
    violations.push_back("0 <= tau_min < tau_max");
  }
  if (!(c.max_iterations >= 1)) violations.push_back("k_max >= 1");
  if (!(c.decay_start >= 0 && c.decay_start < c.max_iterations)) {
    violations.push_back("0 <= k0 < k_max");
  }
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid agent configuration, violated:";
  for (const auto& v : violations) msg << " [" << v << "]";
  throw ConfigError(msg.str());
}

ExplorationTable::ExplorationTable(Index dim, double value)
    : dim_(dim), values_(static_cast<std::size_t>(dim * (dim - 1) / 2), value) {}

std::size_t ExplorationTable::pair_index(Index j, Index l) const {
  if (j < 0 || l >= dim_ || j >= l) {
    std::ostringstream msg;
    msg << "exploration pair (" << j << "," << l << ") invalid for d=" << dim_;
    throw IndexError(msg.str());
  }
  // Pairs before row j: sum_{i<j} (d - 1 - i).
  const Index before = j * (2 * dim_ - j - 1) / 2;
  return static_cast<std::size_t>(before + (l - j - 1));
}

double ExplorationTable::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

void ExplorationTable::fill(double value) {
  std::fill(values_.begin(), values_.end(), value);
}

AgentState init(Index dim, const AgentConfig& config) {
  if (dim < 2) throw PreconditionError("agent init: dimension must be at least 2");
  validate(config);
  AgentState state;
  state.config = config;
  state.unitary = ComplexMatrix::Identity(dim, dim);
  state.w = ExplorationTable(dim, 1.0);
  state.k = 1;
  state.rng = RandomStream(config.seed);
  return state;
}

double updated_exploration(PairCase pair_case, double w, double r, double p) {
  switch (pair_case) {
    case PairCase::kDoubleReward: return r * r * w;
    case PairCase::kMixed: return std::min(r * p * w, 1.0);
    case PairCase::kDoublePunishment: return std::min(p * p * w, 1.0);
  }
  return w;
}

PairCase classify_pair(Index j, Index l, const std::vector<Index>& outcomes) {
  const bool j_ok = outcomes[j] != l;
  const bool l_ok = outcomes[l] != j;
  if (j_ok && l_ok) return PairCase::kDoubleReward;
  if (j_ok || l_ok) return PairCase::kMixed;
  return PairCase::kDoublePunishment;
}

namespace {

constexpr std::int64_t kDriftCheckInterval = 16;
// Re-orthonormalize well before the 1e-10 invariant can be reached.
constexpr double kDriftTrigger = tol::kDrift * 1e-2;

// Newton-Schulz iteration towards the unitary polar factor. Uses products
// only, so exact zeros in block-structured D stay exact.
void reorthonormalize(ComplexMatrix& d) {
  const Index n = d.cols();
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  for (int iter = 0; iter < 4; ++iter) {
    const ComplexMatrix gram = d.adjoint() * d;
    if ((gram - identity).cwiseAbs().maxCoeff() < 1e-15) break;
    d = (d * (3.0 * identity - gram) * 0.5).eval();
  }
}

}  // namespace

std::optional<IterationRecord> iterate(AgentState& state,
                                       const models::HamiltonianModel& model) {
  const AgentConfig& config = state.config;
  if (state.k > config.max_iterations) return std::nullopt;
  const Index d = state.unitary.cols();
  if (model.dim() != d) {
    std::ostringstream msg;
    msg << "iterate: model dimension " << model.dim() << " does not match agent dimension " << d;
    throw PreconditionError(msg.str());
  }

  IterationRecord record;
  record.k = state.k;
  record.tau = state.rng.uniform(config.tau_min, config.tau_max);

  // Column j of D^dagger U(tau) D is the state of qudit j before measurement:
  // with W = V^dagger D, D^dagger U D = W^dagger diag(exp(-i tau E)) W.
  const Spectrum& spec = model.spectrum;
  const ComplexMatrix overlaps = spec.eigenvectors.adjoint() * state.unitary;
  Eigen::VectorXcd phases(d);
  for (Index a = 0; a < d; ++a) phases(a) = std::polar(1.0, -record.tau * spec.energies(a));
  const ComplexMatrix returned = overlaps.adjoint() * phases.asDiagonal() * overlaps;

  record.outcomes.resize(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) {
    record.outcomes[j] = quantum::measure_computational(returned.col(j), state.rng);
  }

  record.pair_cases.reserve(state.w.pair_count());
  const double r = config.reward_rate;
  const double p = config.punishment_rate;
  std::size_t pair = 0;
  for (Index j = 0; j + 1 < d; ++j) {
    for (Index l = j + 1; l < d; ++l, ++pair) {
      const PairCase pair_case = classify_pair(j, l, record.outcomes);
      record.pair_cases.push_back(pair_case);
      double& w = state.w.values()[pair];
      if (pair_case != PairCase::kDoubleReward) {
        const double half_width = std::numbers::pi * w;
        quantum::RotationAngles angles;
        angles.alpha = state.rng.uniform(-half_width, half_width);
        angles.beta = state.rng.uniform(-half_width, half_width);
        angles.gamma = state.rng.uniform(-half_width, half_width);
        quantum::apply_rotation_right(state.unitary, j, l, angles);
      }
      w = updated_exploration(pair_case, w, r, p);
    }
  }

  if (state.k % kDriftCheckInterval == 0 && unitarity_residual(state.unitary) > kDriftTrigger) {
    reorthonormalize(state.unitary);
    ++state.reorthonormalizations;
  }

  record.w_max = state.w.max();
  ++state.k;
  return record;
}

double scheduled_reset_value(const AgentConfig& config, std::int64_t k) {
  if (k <= config.decay_start) return config.w_reset;
  const double remaining = static_cast<double>(config.max_iterations - k);
  const double span = static_cast<double>(config.max_iterations - config.decay_start);
  return config.w_reset * std::max(remaining, 0.0) / span;
}

Status check_convergence(AgentState& state, const AgentConfig& config) {
  if (state.w.max() >= config.w_threshold) return Status::kRunning;
  state.converged_once = true;
  if (!config.reset_enabled) return Status::kConverged;
  const double value = scheduled_reset_value(config, state.k);
  if (value <= config.w_threshold) return Status::kConverged;
  state.w.fill(value);
  return Status::kResetApplied;
}

RealizationRun run_realization(const models::HamiltonianModel& model,
                               const AgentConfig& config,
                               const IterationObserver& observer) {
  RealizationRun run;
  run.final_state = init(model.dim(), config);
  AgentState& state = run.final_state;
  while (auto record = iterate(state, model)) {
    const Status status = check_convergence(state, config);
    record->reset_triggered = status == Status::kResetApplied;
    if (observer) observer(state, *record, status);
    if (status == Status::kConverged) {
      run.converged = true;
      break;
    }
  }
  run.iterations = state.k - 1;
  return run;
}

RealizationRun run_realization(const models::HamiltonianModel& model,
                               const AgentConfig& config) {
  std::vector<IterationRecord> trajectory;
  RealizationRun run = run_realization(
      model, config, [&](const AgentState&, const IterationRecord& record, Status) {
        trajectory.push_back(record);
      });
  run.trajectory = std::move(trajectory);
  return run;
}

}  // namespace fixpointrl::agent
