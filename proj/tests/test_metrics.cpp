#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixpointrl/errors.hpp"
#include "fixpointrl/hamiltonians.hpp"
#include "fixpointrl/metrics.hpp"
#include "fixpointrl/quantum.hpp"
#include "oracles.hpp"

namespace fixpointrl {
namespace {

Spectrum spectrum_of(const ComplexMatrix& h) { return quantum::eig_hermitian(h); }

TEST(Fidelity, IdentityAndEigenbasis) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h.diagonal() << 0.2, 0.9, 0.5;
  const Spectrum diag = spectrum_of(h);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(metrics::fidelity(ComplexMatrix::Identity(3, 3), diag, j), 1.0);
  RandomStream rng(1);
  const Spectrum s = spectrum_of(oracle::random_hermitian(5, rng));
  const RealVector f = metrics::fidelities(s.eigenvectors, s);
  for (Index j = 0; j < 5; ++j) EXPECT_NEAR(f(j), 1.0, 1e-12);
}

TEST(Fidelity, MatchesExhaustiveOverlapOracle) {
  RandomStream rng(2);
  int cases = 0;
  for (Index d : {2, 4, 8, 16}) {
    for (int rep = 0; rep < 30; ++rep) {
      const Spectrum s = spectrum_of(oracle::random_hermitian(d, rng));
      const ComplexMatrix u = oracle::random_unitary(d, rng);
      const RealVector all = metrics::fidelities(u, s);
      for (Index j = 0; j < d; ++j) {
        double best = 0.0;
        for (Index a = 0; a < d; ++a) {
          Complex overlap = 0.0;
          for (Index i = 0; i < d; ++i) overlap += std::conj(s.eigenvectors(i, a)) * u(i, j);
          best = std::max(best, std::abs(overlap));
        }
        ASSERT_NEAR(metrics::fidelity(u, s, j), best, 1e-12);
        ASSERT_NEAR(all(j), best, 1e-12);
      }
      ++cases;
    }
  }
  EXPECT_GE(cases, 100);
}

TEST(SubspaceFidelity, DegeneratePairAndBounds) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h.diagonal() << 0.0, 0.5, 0.5;
  const Spectrum s = spectrum_of(h);
  ComplexMatrix d = ComplexMatrix::Identity(3, 3);
  const double c = std::cos(0.4), sn = std::sin(0.4);
  d(1, 1) = c;
  d(2, 1) = sn;
  d(1, 2) = -sn;
  d(2, 2) = c;
  EXPECT_NEAR(metrics::subspace_fidelity(d, s, 1), 1.0, 1e-15);
  EXPECT_LT(metrics::fidelity(d, s, 1), 0.95);

  RandomStream rng(3);
  const Spectrum generic = spectrum_of(oracle::random_hermitian(6, rng));
  const ComplexMatrix u = oracle::random_unitary(6, rng);
  for (Index j = 0; j < 6; ++j) {
    EXPECT_NEAR(metrics::subspace_fidelity(u, generic, j), metrics::fidelity(u, generic, j), 1e-12);
  }
  // pointwise: fidelity <= subspace_fidelity <= 1
  const auto pairing = models::build_pairing(4, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix v = oracle::random_unitary(16, rng);
    for (Index j = 0; j < 16; ++j) {
      const double f = metrics::fidelity(v, pairing.spectrum, j);
      const double g = metrics::subspace_fidelity(v, pairing.spectrum, j);
      ASSERT_LE(f, g + 1e-12);
      ASSERT_LE(g, 1.0 + 1e-12);
    }
  }
}

TEST(DegeneracyClusters, GroupsEqualEnergies) {
  ComplexMatrix h = ComplexMatrix::Zero(5, 5);
  h.diagonal() << 0.0, 0.3, 0.3, 0.3 + 1e-10, 1.0;
  const auto clusters = metrics::degeneracy_clusters(spectrum_of(h), 1e-8);
  ASSERT_EQ(clusters.size(), 3u);
  EXPECT_EQ(clusters[1], (std::pair<Index, Index>{1, 4}));
}

TEST(Energy, ExpectationExamples) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h.diagonal() << 0.1, 0.7, 0.4;
  for (Index j = 0; j < 3; ++j)
    EXPECT_EQ(metrics::energy_expectation(ComplexMatrix::Identity(3, 3), h, j), h(j, j).real());
  RandomStream rng(4);
  const auto m = models::build_random(8, rng);
  const ComplexMatrix d = oracle::random_unitary(8, rng);
  for (Index j = 0; j < 8; ++j) {
    const Complex sandwich = (d.adjoint() * m.rescaled * d)(j, j);
    EXPECT_NEAR(metrics::energy_expectation(d, m.rescaled, j), sandwich.real(), 1e-12);
    EXPECT_NEAR(metrics::energy_expectation(m.spectrum.eigenvectors, m.rescaled, j), m.spectrum.energies(j), 1e-12);
  }
}

TEST(Energy, FluctuationExamples) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(1, 1) = 1.0;
  EXPECT_EQ(metrics::energy_fluctuation(ComplexMatrix::Identity(2, 2), h, 0), 0.0);
  ComplexMatrix d(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  d << r, r, r, -r;
  EXPECT_NEAR(metrics::energy_fluctuation(d, h, 0), 0.5, 1e-15);
}

TEST(Energy, FluctuationMatchesSpectralOracle) {
  RandomStream rng(5);
  int cases = 0;
  for (Index dim : {2, 4, 8, 16}) {
    for (int rep = 0; rep < 30; ++rep) {
      const ComplexMatrix h = models::rescale(oracle::random_hermitian(dim, rng)).h_tilde;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
      const ComplexMatrix d = oracle::random_unitary(dim, rng);
      const Index j = rep % dim;
      const StateVector c = es.eigenvectors().adjoint() * d.col(j);
      double m1 = 0.0, m2 = 0.0;
      for (Index a = 0; a < dim; ++a) {
        m1 += std::norm(c(a)) * es.eigenvalues()(a);
        m2 += std::norm(c(a)) * es.eigenvalues()(a) * es.eigenvalues()(a);
      }
      const double sigma = std::sqrt(std::max(m2 - m1 * m1, 0.0));
      ASSERT_NEAR(metrics::energy_fluctuation(d, h, j), sigma, 1e-10);
      const auto mom = metrics::energy_moments(d, h, j);
      ASSERT_NEAR(mom.variance + mom.mean * mom.mean, mom.second_moment, 1e-10);
      ASSERT_GE(mom.mean, -1e-10);
      ASSERT_LE(mom.mean, 1.0 + 1e-10);
      ++cases;
    }
  }
  EXPECT_GE(cases, 100);
}

TEST(Energy, SigmaScalesAsSqrtInfidelity) {
  // Perturb an eigenvector by angle t: 1 - F ~ t^2 / 2 and sigma ~ t.
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h.diagonal() << 0.0, 0.4, 1.0;
  const Spectrum s = spectrum_of(h);
  std::vector<double> lx, ly;
  for (double t : {1e-4, 1e-3, 1e-2}) {
    ComplexMatrix d = ComplexMatrix::Identity(3, 3);
    d(0, 0) = std::cos(t);
    d(1, 0) = std::sin(t);
    d(0, 1) = -std::sin(t);
    d(1, 1) = std::cos(t);
    lx.push_back(std::log(1.0 - metrics::fidelity(d, s, 0)));
    ly.push_back(std::log(metrics::energy_fluctuation(d, h, 0)));
  }
  const double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
  EXPECT_NEAR(slope, 0.5, 0.02);
}

TEST(NearestEigenvalue, Examples) {
  const RealVector e{{0.0, 0.25, 1.0}};
  EXPECT_EQ(metrics::nearest_eigenvalue_distance(0.25, e), 0.0);
  EXPECT_NEAR(metrics::nearest_eigenvalue_distance(0.625, e), 0.375, 1e-15);
  EXPECT_NEAR(metrics::nearest_eigenvalue_distance(-0.5, e), 0.5, 1e-15);
}

metrics::RealizationResult constant_result(std::int64_t index, Index dim, std::int64_t length, double f,
                                           double w) {
  metrics::RealizationResult r;
  r.realization_index = index;
  r.dim = dim;
  r.fidelity_trajectory.assign(static_cast<std::size_t>(length * dim), f);
  r.w_max_trajectory.assign(static_cast<std::size_t>(length), w);
  return r;
}

TEST(Aggregate, SingleAndTwoRealizations) {
  const auto one = metrics::aggregate({constant_result(0, 2, 10, 0.9, 0.5)});
  EXPECT_EQ(one.length, 10);
  EXPECT_EQ(one.fidelity_at(3, 1), 0.9);
  EXPECT_EQ(one.mean_w_max[4], 0.5);
  const auto two = metrics::aggregate({constant_result(0, 2, 10, 0.9, 0.5), constant_result(1, 2, 10, 1.0, 0.5)});
  EXPECT_NEAR(two.fidelity_at(0, 0), 0.95, 1e-15);
  EXPECT_NEAR(two.f_max, 0.95, 1e-15);
  EXPECT_NEAR(two.f_min, 0.95, 1e-15);
}

TEST(Aggregate, PadsShorterTrajectoriesWithTerminalValues) {
  auto a = constant_result(0, 1, 4, 0.5, 0.2);
  a.fidelity_trajectory.back() = 0.7;
  auto b = constant_result(1, 1, 8, 1.0, 0.1);
  const auto agg = metrics::aggregate({a, b});
  EXPECT_EQ(agg.length, 8);
  EXPECT_NEAR(agg.fidelity_at(7, 0), 0.85, 1e-15);
  EXPECT_NEAR(agg.mean_w_max[7], 0.15, 1e-15);
}

TEST(Aggregate, PermutationInvariant) {
  RandomStream rng(6);
  std::vector<metrics::RealizationResult> results;
  for (int i = 0; i < 6; ++i) {
    auto r = constant_result(i, 3, 20 + i, 0.0, 0.0);
    for (auto& v : r.fidelity_trajectory) v = rng.uniform01();
    for (auto& v : r.w_max_trajectory) v = rng.uniform01();
    results.push_back(r);
  }
  const auto a = metrics::aggregate(results);
  std::reverse(results.begin(), results.end());
  std::swap(results[1], results[4]);
  const auto b = metrics::aggregate(results);
  for (std::size_t i = 0; i < a.mean_fidelity.size(); ++i) ASSERT_NEAR(a.mean_fidelity[i], b.mean_fidelity[i], 1e-14);
  EXPECT_NEAR(a.f_max, b.f_max, 1e-14);
}

TEST(Aggregate, Errors) {
  EXPECT_THROW(metrics::aggregate({}), PreconditionError);
  EXPECT_THROW(metrics::aggregate({constant_result(0, 2, 3, 1, 1), constant_result(1, 3, 3, 1, 1)}),
               PreconditionError);
}

TEST(Plateau, WindowIsLastFivePercent) {
  auto r = constant_result(0, 1, 100, 0.0, 0.0);
  for (int k = 0; k < 100; ++k) r.fidelity_trajectory[static_cast<std::size_t>(k)] = k;
  const auto agg = metrics::aggregate({r});
  EXPECT_NEAR(agg.plateau(0), 97.0, 1e-12);  // mean of 95..99
  const auto tiny = metrics::aggregate({constant_result(0, 1, 3, 0.6, 0.0)});
  EXPECT_NEAR(tiny.plateau(0), 0.6, 1e-15);
}

TEST(PostSelect, Examples) {
  const std::vector<metrics::SelectedState> states = {{0, 0, 0.1, 0.01}, {0, 1, 0.2, 0.05}, {0, 2, 0.3, 0.001}};
  const auto kept = metrics::post_select(states, 0.02);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].state_index, 0);
  EXPECT_EQ(kept[1].state_index, 2);
  EXPECT_EQ(metrics::post_select(states, 1.0), states);
  EXPECT_THROW(metrics::post_select(states, 0.0), PreconditionError);
}

TEST(DistanceStats, MeanAndStandardError) {
  const RealVector e{{0.0, 1.0}};
  const std::vector<metrics::SelectedState> states = {
      {0, 0, 0.1, 0.01}, {0, 1, 0.8, 0.01}, {1, 0, 0.5, 0.3}};
  const auto s = metrics::distance_stats(states, e, 0.02);
  EXPECT_EQ(s.count, 2);
  EXPECT_NEAR(s.mean_distance, 0.15, 1e-15);
  EXPECT_NEAR(s.std_error, std::sqrt(0.005) / std::sqrt(2.0), 1e-15);
  const auto sweep = metrics::distance_sweep(states, e, {0.02, 1.0});
  ASSERT_EQ(sweep.size(), 2u);
  EXPECT_EQ(sweep[1].count, 3);
  const auto none = metrics::distance_stats(states, e, 0.001);
  EXPECT_EQ(none.count, 0);
}

TEST(Convergence, IntegratedInfidelityAndGapClusters) {
  auto r = constant_result(0, 3, 4, 1.0, 0.0);
  r.fidelity_trajectory = {1.0, 0.5, 0.0, 1.0, 0.75, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const RealVector total = metrics::integrated_infidelity(metrics::aggregate({r}));
  EXPECT_NEAR(total(0), 0.0, 1e-15);
  EXPECT_NEAR(total(1), 0.75, 1e-15);
  EXPECT_NEAR(total(2), 1.5, 1e-15);

  const RealVector v{{350.0, 0.0, 960.0, 352.0, 0.0, 955.0}};
  EXPECT_EQ(metrics::gap_clusters(v, 3), (std::vector<int>{1, 0, 2, 1, 0, 2}));
  EXPECT_EQ(metrics::gap_clusters(v, 1), std::vector<int>(6, 0));
  EXPECT_THROW(metrics::gap_clusters(v, 7), PreconditionError);
}

}  // namespace
}  // namespace fixpointrl
