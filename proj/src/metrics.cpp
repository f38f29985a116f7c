#include "fixpointrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fixpointrl/errors.hpp"

namespace fixpointrl::metrics {

namespace {

void require_square_match(const ComplexMatrix& d, Index n, const char* where) {
  if (d.rows() != n || d.cols() != n) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (" << d.rows() << "x" << d.cols() << " vs " << n << ")";
    throw PreconditionError(msg.str());
  }
}

void require_index(Index j, Index n, const char* where) {
  if (j < 0 || j >= n) {
    std::ostringstream msg;
    msg << where << ": state index " << j << " outside [0, " << n << ")";
    throw IndexError(msg.str());
  }
}

}  // namespace

double fidelity(const ComplexMatrix& d, const Spectrum& spec, Index j) {
  require_square_match(d, spec.dim(), "fidelity");
  require_index(j, spec.dim(), "fidelity");
  return (spec.eigenvectors.adjoint() * d.col(j)).cwiseAbs().maxCoeff();
}

RealVector fidelities(const ComplexMatrix& d, const Spectrum& spec) {
  require_square_match(d, spec.dim(), "fidelities");
  return (spec.eigenvectors.adjoint() * d).cwiseAbs().colwise().maxCoeff().transpose();
}

std::vector<std::pair<Index, Index>> degeneracy_clusters(const Spectrum& spec,
                                                         double degeneracy_tol) {
  std::vector<std::pair<Index, Index>> clusters;
  Index start = 0;
  for (Index a = 1; a <= spec.dim(); ++a) {
    if (a == spec.dim() || spec.energies(a) - spec.energies(a - 1) > degeneracy_tol) {
      clusters.emplace_back(start, a);
      start = a;
    }
  }
  return clusters;
}

double subspace_fidelity(const ComplexMatrix& d, const Spectrum& spec, Index j,
                         double degeneracy_tol) {
  require_square_match(d, spec.dim(), "subspace_fidelity");
  require_index(j, spec.dim(), "subspace_fidelity");
  if (!(degeneracy_tol > 0.0)) throw PreconditionError("subspace_fidelity: tolerance must be positive");
  const RealVector weights = (spec.eigenvectors.adjoint() * d.col(j)).cwiseAbs2();
  double best = 0.0;
  for (const auto& [begin, end] : degeneracy_clusters(spec, degeneracy_tol)) {
    best = std::max(best, std::sqrt(weights.segment(begin, end - begin).sum()));
  }
  return best;
}

double energy_expectation(const ComplexMatrix& d, const ComplexMatrix& h, Index j) {
  return energy_moments(d, h, j).mean;
}

EnergyMoments energy_moments(const ComplexMatrix& d, const ComplexMatrix& h, Index j) {
  require_square_match(d, h.rows(), "energy_moments");
  require_index(j, h.rows(), "energy_moments");
  const StateVector v = d.col(j);
  const StateVector hv = h * v;
  EnergyMoments m;
  m.mean = v.dot(hv).real();
  m.second_moment = hv.squaredNorm();
  m.variance = m.second_moment - m.mean * m.mean;
  if (m.variance < -tol::kVarianceClamp) {
    std::ostringstream msg;
    msg << "energy_fluctuation: negative variance " << m.variance;
    throw NumericalError(msg.str());
  }
  m.sigma = std::sqrt(std::max(m.variance, 0.0));
  return m;
}

double energy_fluctuation(const ComplexMatrix& d, const ComplexMatrix& h, Index j) {
  return energy_moments(d, h, j).sigma;
}

double nearest_eigenvalue_distance(double energy, const RealVector& energies) {
  if (energies.size() == 0) throw PreconditionError("nearest_eigenvalue_distance: empty spectrum");
  return (energies.array() - energy).abs().minCoeff();
}

void TrajectoryAccumulator::add(const RealizationResult& result) {
  if (result.dim != dim_) {
    throw PreconditionError("aggregate: realizations have different dimensions");
  }
  const auto len = static_cast<std::size_t>(result.length());
  const auto d = static_cast<std::size_t>(dim_);
  if (result.fidelity_trajectory.size() != len * d) {
    throw PreconditionError("aggregate: fidelity trajectory length does not match w_max trajectory");
  }
  if (w_max_sum_.size() < len) {
    w_max_sum_.resize(len, 0.0);
    fidelity_sum_.resize(len * d, 0.0);
  }
  for (std::size_t i = 0; i < len * d; ++i) fidelity_sum_[i] += result.fidelity_trajectory[i];
  for (std::size_t k = 0; k < len; ++k) w_max_sum_[k] += result.w_max_trajectory[k];

  Tail tail;
  tail.length = static_cast<std::int64_t>(len);
  if (len > 0) {
    tail.last_fidelity.assign(result.fidelity_trajectory.end() - static_cast<std::ptrdiff_t>(d),
                              result.fidelity_trajectory.end());
    tail.last_w_max = result.w_max_trajectory.back();
  } else {
    tail.last_fidelity = result.final_fidelities;
    tail.last_w_max = 1.0;
  }
  tails_.push_back(std::move(tail));
  ++count_;
}

AggregateResult TrajectoryAccumulator::finish() const {
  if (count_ == 0) throw PreconditionError("aggregate: no realizations");
  const auto d = static_cast<std::size_t>(dim_);
  const std::size_t len = w_max_sum_.size();
  std::vector<double> fsum = fidelity_sum_;
  std::vector<double> wsum = w_max_sum_;
  for (const Tail& tail : tails_) {
    for (auto k = static_cast<std::size_t>(tail.length); k < len; ++k) {
      for (std::size_t j = 0; j < d; ++j) fsum[k * d + j] += tail.last_fidelity[j];
      wsum[k] += tail.last_w_max;
    }
  }
  AggregateResult agg;
  agg.dim = dim_;
  agg.realizations = count_;
  agg.length = static_cast<std::int64_t>(len);
  const double n = static_cast<double>(count_);
  agg.mean_fidelity.resize(fsum.size());
  agg.mean_w_max.resize(wsum.size());
  std::transform(fsum.begin(), fsum.end(), agg.mean_fidelity.begin(), [n](double s) { return s / n; });
  std::transform(wsum.begin(), wsum.end(), agg.mean_w_max.begin(), [n](double s) { return s / n; });
  if (len > 0) {
    agg.plateau = plateau_means(agg);
    agg.f_max = agg.plateau.maxCoeff();
    agg.f_min = agg.plateau.minCoeff();
  }
  return agg;
}

AggregateResult aggregate(const std::vector<RealizationResult>& results) {
  if (results.empty()) throw PreconditionError("aggregate: no realizations");
  TrajectoryAccumulator acc(results.front().dim);
  for (const auto& r : results) acc.add(r);
  return acc.finish();
}

RealVector plateau_means(const AggregateResult& agg, double fraction) {
  if (agg.length == 0) throw PreconditionError("plateau_means: empty trajectory");
  const auto window = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(fraction * static_cast<double>(agg.length))));
  RealVector plateau = RealVector::Zero(agg.dim);
  for (std::int64_t k = agg.length - window; k < agg.length; ++k) {
    for (Index j = 0; j < agg.dim; ++j) plateau(j) += agg.fidelity_at(k, j);
  }
  return plateau / static_cast<double>(window);
}

std::vector<SelectedState> post_select(const std::vector<SelectedState>& states,
                                       double sigma_th) {
  if (!(sigma_th > 0.0)) throw PreconditionError("post_select: sigma_th must be positive");
  std::vector<SelectedState> kept;
  std::copy_if(states.begin(), states.end(), std::back_inserter(kept),
               [sigma_th](const SelectedState& s) { return s.sigma <= sigma_th; });
  std::stable_sort(kept.begin(), kept.end(), [](const SelectedState& a, const SelectedState& b) {
    return a.realization_index != b.realization_index ? a.realization_index < b.realization_index
                                                      : a.state_index < b.state_index;
  });
  return kept;
}

std::vector<SelectedState> final_states(const std::vector<RealizationResult>& results) {
  std::vector<SelectedState> states;
  for (const auto& r : results) {
    for (std::size_t j = 0; j < r.final_energies.size(); ++j) {
      states.push_back({r.realization_index, static_cast<Index>(j), r.final_energies[j],
                        r.final_sigmas[j]});
    }
  }
  return states;
}

DistanceStats distance_stats(const std::vector<SelectedState>& states,
                             const RealVector& energies, double sigma_th) {
  DistanceStats stats;
  stats.sigma_th = sigma_th;
  std::vector<double> distances;
  for (const auto& s : states) {
    if (s.sigma <= sigma_th) distances.push_back(nearest_eigenvalue_distance(s.energy, energies));
  }
  stats.count = static_cast<std::int64_t>(distances.size());
  if (distances.empty()) return stats;
  const double n = static_cast<double>(distances.size());
  stats.mean_distance = std::accumulate(distances.begin(), distances.end(), 0.0) / n;
  if (distances.size() > 1) {
    double ss = 0.0;
    for (double x : distances) ss += (x - stats.mean_distance) * (x - stats.mean_distance);
    stats.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return stats;
}

std::vector<DistanceStats> distance_sweep(const std::vector<SelectedState>& states,
                                          const RealVector& energies,
                                          const std::vector<double>& thresholds) {
  std::vector<DistanceStats> sweep;
  sweep.reserve(thresholds.size());
  for (double th : thresholds) sweep.push_back(distance_stats(states, energies, th));
  return sweep;
}

RealVector integrated_infidelity(const AggregateResult& agg) {
  RealVector total = RealVector::Zero(agg.dim);
  for (std::int64_t k = 0; k < agg.length; ++k) {
    for (Index j = 0; j < agg.dim; ++j) total(j) += 1.0 - agg.fidelity_at(k, j);
  }
  return total;
}

std::vector<int> gap_clusters(const RealVector& values, int groups) {
  const Index n = values.size();
  if (groups < 1 || groups > n) throw PreconditionError("gap_clusters: bad group count");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) < values(b); });

  std::vector<Index> gap_at(static_cast<std::size_t>(n - 1));
  std::iota(gap_at.begin(), gap_at.end(), Index{0});
  auto gap = [&](Index i) { return values(order[i + 1]) - values(order[i]); };
  std::stable_sort(gap_at.begin(), gap_at.end(), [&](Index a, Index b) { return gap(a) > gap(b); });
  std::vector<Index> cuts(gap_at.begin(), gap_at.begin() + (groups - 1));
  std::sort(cuts.begin(), cuts.end());

  std::vector<int> labels(static_cast<std::size_t>(n));
  int label = 0;
  std::size_t next_cut = 0;
  for (Index i = 0; i < n; ++i) {
    labels[order[i]] = label;
    if (next_cut < cuts.size() && cuts[next_cut] == i) {
      ++label;
      ++next_cut;
    }
  }
  return labels;
}

}  // namespace fixpointrl::metrics
