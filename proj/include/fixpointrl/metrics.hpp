#pragma once

#include <cstdint>
#include <vector>

#include "fixpointrl/linalg.hpp"
#include "fixpointrl/tolerances.hpp"

namespace fixpointrl::metrics {

/// Fraction of the aggregated trajectory averaged to read off F_max / F_min.
inline constexpr double kPlateauFraction = 0.05;

/// max_a |<Phi_a| D |j>|.
double fidelity(const ComplexMatrix& d, const Spectrum& spec, Index j);

/// fidelity() for every column j at once (one matrix product).
RealVector fidelities(const ComplexMatrix& d, const Spectrum& spec);

/// Eigenvalue clusters (index ranges into the ascending spectrum) whose
/// consecutive gaps are within `degeneracy_tol`.
std::vector<std::pair<Index, Index>> degeneracy_clusters(const Spectrum& spec,
                                                         double degeneracy_tol);

/// Largest norm of the projection of D|j> onto one degenerate eigenspace.
double subspace_fidelity(const ComplexMatrix& d, const Spectrum& spec, Index j,
                         double degeneracy_tol = tol::kDegeneracy);

/// <j| D^dagger H D |j>.
double energy_expectation(const ComplexMatrix& d, const ComplexMatrix& h, Index j);

struct EnergyMoments {
  double mean = 0.0;           // <H>
  double second_moment = 0.0;  // <H^2>
  double variance = 0.0;       // second_moment - mean^2 (unclamped)
  double sigma = 0.0;          // sqrt(max(variance, 0)) after the clamp check
};

/// Moments of H in the state D|j>. Throws NumericalError when the variance
/// is below -1e-10; values in [-1e-10, 0) become sigma = 0.
EnergyMoments energy_moments(const ComplexMatrix& d, const ComplexMatrix& h, Index j);

double energy_fluctuation(const ComplexMatrix& d, const ComplexMatrix& h, Index j);

/// min_a |energy - E_a|.
double nearest_eigenvalue_distance(double energy, const RealVector& energies);

struct RealizationResult {
  std::int64_t realization_index = 0;
  Index dim = 0;
  std::vector<double> fidelity_trajectory;  // row k: dim values, f after iteration k+1
  std::vector<double> w_max_trajectory;
  std::vector<double> final_fidelities;
  std::vector<double> final_energies;
  std::vector<double> final_sigmas;
  std::int64_t iterations_to_converge = 0;
  bool converged = false;

  std::int64_t length() const { return static_cast<std::int64_t>(w_max_trajectory.size()); }
};

struct AggregateResult {
  Index dim = 0;
  std::int64_t realizations = 0;
  std::int64_t length = 0;
  std::vector<double> mean_fidelity;  // length x dim, row-major
  std::vector<double> mean_w_max;     // length
  RealVector plateau;                 // per-state plateau mean
  double f_max = 0.0;
  double f_min = 0.0;

  double fidelity_at(std::int64_t k, Index j) const {
    return mean_fidelity[static_cast<std::size_t>(k * dim + j)];
  }
};

/// Streaming form of aggregate(): fold results one by one (in a fixed order
/// for reproducible sums), then finish(). Trajectories shorter than the
/// longest are padded by their last row.
class TrajectoryAccumulator {
 public:
  explicit TrajectoryAccumulator(Index dim) : dim_(dim) {}

  void add(const RealizationResult& result);
  AggregateResult finish() const;
  std::int64_t count() const { return count_; }

 private:
  struct Tail {
    std::int64_t length;
    std::vector<double> last_fidelity;
    double last_w_max;
  };

  Index dim_;
  std::int64_t count_ = 0;
  std::vector<double> fidelity_sum_;
  std::vector<double> w_max_sum_;
  std::vector<Tail> tails_;
};

/// Per-iteration means over realizations plus plateau F_max / F_min.
/// Throws PreconditionError on an empty list or mismatched dimensions.
AggregateResult aggregate(const std::vector<RealizationResult>& results);

/// Mean of each state's curve over the last `fraction` of rows.
RealVector plateau_means(const AggregateResult& agg, double fraction = kPlateauFraction);

struct SelectedState {
  std::int64_t realization_index = 0;
  Index state_index = 0;
  double energy = 0.0;
  double sigma = 0.0;

  friend bool operator==(const SelectedState&, const SelectedState&) = default;
};

/// States with sigma <= sigma_th, ordered by (realization, state).
std::vector<SelectedState> post_select(const std::vector<SelectedState>& states,
                                       double sigma_th);

/// Flatten the final energies / sigmas of each realization.
std::vector<SelectedState> final_states(const std::vector<RealizationResult>& results);

struct DistanceStats {
  double sigma_th = 0.0;
  double mean_distance = 0.0;
  double std_error = 0.0;
  std::int64_t count = 0;
};

/// Mean nearest-eigenvalue distance of the states with sigma <= sigma_th.
/// std_error is the sample standard deviation over sqrt(count); zero when count < 2.
DistanceStats distance_stats(const std::vector<SelectedState>& states,
                             const RealVector& energies, double sigma_th);

std::vector<DistanceStats> distance_sweep(const std::vector<SelectedState>& states,
                                          const RealVector& energies,
                                          const std::vector<double>& thresholds);

/// Per-state integrated infidelity sum_k (1 - F_k^{(j)}): a convergence-speed score.
RealVector integrated_infidelity(const AggregateResult& agg);

/// Split values into `groups` clusters at the largest gaps of the sorted values.
/// Returns a cluster label per input, labels ascending with value.
std::vector<int> gap_clusters(const RealVector& values, int groups);

}  // namespace fixpointrl::metrics
