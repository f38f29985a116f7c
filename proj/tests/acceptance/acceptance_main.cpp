// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixpointrl/agent.hpp"
#include "fixpointrl/csv_io.hpp"
#include "fixpointrl/experiment.hpp"
#include "fixpointrl/hamiltonians.hpp"
#include "fixpointrl/metrics.hpp"
#include "fixpointrl/quantum.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
namespace ex = fixpointrl::experiments;
using namespace fixpointrl;

namespace {

// Pinned tolerances and bands.
constexpr double kFig2OnCenter = 0.98, kFig2OffCenter = 0.97, kFig2HalfWidth = 0.02;
constexpr double kFig2MaxSeconds = 120.0;
constexpr double kFig3OffLo = 0.87, kFig3OffHi = 0.94, kFig3OnLo = 0.94, kFig3OnHi = 1.0;
constexpr double kFig3MinGain = 0.03;
constexpr double kFig3MaxSeconds = 600.0;
constexpr double kTfimSlack = 0.02;
constexpr double kSpectrumMatch = 1e-8;
constexpr double kSelectionRatio = 0.5;
constexpr double kSurvivalTol = 1e-10, kFluctuationTol = 1e-10, kFidelityTol = 1e-12, kEvolveTol = 1e-9;
constexpr int kOracleCases = 100;
constexpr Index kOracleMaxDim = 16;
constexpr double kUnitarityTol = 1e-10;

struct Line {
  int id;
  bool pass;
  std::string detail;
};

fs::path g_root;

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double mean_plateau(const metrics::AggregateResult& agg) { return agg.plateau.mean(); }

struct TimedRun {
  ex::ExperimentOutcome outcome;
  double seconds;
};

TimedRun run_preset(const std::string& preset, const std::string& tag,
                    const std::vector<std::string>& overrides = {}) {
  auto config = ex::preset(preset);
  for (const auto& o : overrides) ex::apply_override(config, o);
  config.output_dir = g_root / tag;
  const auto t0 = std::chrono::steady_clock::now();
  auto outcome = ex::execute_experiment(config);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "  [%s] %.1f s, F_max %.4f F_min %.4f\n", tag.c_str(), s, outcome.aggregate.f_max,
               outcome.aggregate.f_min);
  return {std::move(outcome), s};
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

Line criterion1() {
  const auto on = run_preset("fig2", "fig2_reset_on");
  const auto off = run_preset("fig2", "fig2_reset_off", {"reset=off"});
  const double lo_on = kFig2OnCenter - kFig2HalfWidth, hi_on = kFig2OnCenter + kFig2HalfWidth;
  const double lo_off = kFig2OffCenter - kFig2HalfWidth, hi_off = kFig2OffCenter + kFig2HalfWidth;
  const auto& a = on.outcome.aggregate;
  const auto& b = off.outcome.aggregate;
  const bool pass = within(a.f_max, lo_on, hi_on) && within(a.f_min, lo_on, hi_on) && within(b.f_max, lo_off, hi_off) &&
                    within(b.f_min, lo_off, hi_off) && on.seconds <= kFig2MaxSeconds;
  return {1, pass,
          fmt("random 2q: reset on F_max %.4f F_min %.4f (band [%.2f, %.2f]); reset off F_max %.4f F_min %.4f "
              "(band [%.2f, %.2f]); runtime %.1f s (limit %.0f s)",
              a.f_max, a.f_min, lo_on, hi_on, b.f_max, b.f_min, lo_off, hi_off, on.seconds, kFig2MaxSeconds)};
}

Line criterion2() {
  const auto on = run_preset("fig3", "fig3_reset_on");
  const auto off = run_preset("fig3", "fig3_reset_off", {"reset=off"});
  const auto& a = on.outcome.aggregate;
  const auto& b = off.outcome.aggregate;
  const double gain = mean_plateau(a) - mean_plateau(b);
  const bool pass = within(a.f_max, kFig3OnLo, kFig3OnHi) && within(a.f_min, kFig3OnLo, kFig3OnHi) &&
                    within(b.f_max, kFig3OffLo, kFig3OffHi) && within(b.f_min, kFig3OffLo, kFig3OffHi) &&
                    gain >= kFig3MinGain && on.seconds <= kFig3MaxSeconds && off.seconds <= kFig3MaxSeconds;
  return {2, pass,
          fmt("random 3q: reset off F_max %.4f F_min %.4f (band [%.2f, %.2f]); reset on F_max %.4f F_min %.4f "
              "(band [%.2f, %.2f]); mean gain %.4f (min %.2f); runtime %.1f s / %.1f s (limit %.0f s)",
              b.f_max, b.f_min, kFig3OffLo, kFig3OffHi, a.f_max, a.f_min, kFig3OnLo, kFig3OnHi, gain,
              kFig3MinGain, on.seconds, off.seconds, kFig3MaxSeconds)};
}

Line criterion3() {
  struct Band {
    int qubits;
    double lo, hi;
  };
  const Band bands[] = {{2, 0.993, 0.996}, {3, 0.985, 0.988}, {4, 0.961, 0.968}};
  bool pass = true;
  std::ostringstream detail;
  double mean_r090 = 0.0;
  for (const auto& band : bands) {
    const auto run = run_preset("fig4", "tfim_" + std::to_string(band.qubits) + "q",
                                {"qubits=" + std::to_string(band.qubits)});
    const auto& agg = run.outcome.aggregate;
    const double lo = band.lo - kTfimSlack, hi = band.hi + kTfimSlack;
    const bool ok = within(agg.f_max, lo, hi) && within(agg.f_min, lo, hi);
    pass = pass && ok;
    detail << band.qubits << "q F_max " << fmt("%.4f", agg.f_max) << " F_min " << fmt("%.4f", agg.f_min)
           << fmt(" [%.3f, %.3f]", lo, hi) << (ok ? "" : " OUT") << "; ";
    if (band.qubits == 4) mean_r090 = mean_plateau(agg);
  }
  const auto r093 = run_preset("fig5", "tfim_4q_r093");
  const double mean_r093 = mean_plateau(r093.outcome.aggregate);
  pass = pass && mean_r093 >= mean_r090;
  detail << fmt("4q mean plateau r=0.93 %.4f vs r=0.90 %.4f", mean_r093, mean_r090);
  return {3, pass, detail.str()};
}

// Pairing runs shared by criteria 4-6.
std::vector<ex::ExperimentOutcome> g_pairing;

Line criterion4() {
  bool pass = true;
  std::ostringstream detail;
  for (int n = 2; n <= 5; ++n) {
    const auto run = run_preset("fig6-n" + std::to_string(n), "pairing_n" + std::to_string(n));
    const auto& agg = run.outcome.aggregate;
    const Index d = agg.dim;
    std::int64_t bad = 0;
    for (std::int64_t k = 0; k < agg.length; ++k) bad += agg.fidelity_at(k, 0) != 1.0 || agg.fidelity_at(k, d - 1) != 1.0;
    // The written CSV must say exactly 1 as well.
    const auto csv = io::read_csv(g_root / ("pairing_n" + std::to_string(n)) / "fidelity.csv",
                                  {"iteration", "state_index", "mean_fidelity"});
    for (const auto& row : csv.rows)
      if ((row[1] == 0 || row[1] == static_cast<double>(d - 1)) && row[2] != 1.0) ++bad;
    pass = pass && bad == 0 && agg.length > 0;
    detail << "N=" << n << ": " << agg.length << " iterations, " << bad << " deviations; ";
    g_pairing.push_back(run.outcome);
  }
  return {4, pass, detail.str() + "states |0> and |d-1> compared exactly to 1.0"};
}

Line criterion5() {
  const auto& n5 = g_pairing.back();
  const RealVector score = metrics::integrated_infidelity(n5.aggregate);
  const auto labels = metrics::gap_clusters(score, 3);
  // Expected membership: exact states, weights {1, 4} (dim 5), weights {2, 3} (dim 10).
  auto expected_group = [](Index j) {
    const int w = models::hamming_weight(j);
    return (w == 0 || w == 5) ? 0 : (w == 1 || w == 4) ? 1 : 2;
  };
  bool membership = true;
  std::vector<int> sizes(3, 0);
  for (Index j = 0; j < score.size(); ++j) {
    membership = membership && labels[static_cast<std::size_t>(j)] == expected_group(j);
    ++sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
  }

  auto config = ex::preset("fig7-n5");
  config.output_dir = g_root / "sectors_n5";
  const auto t0 = std::chrono::steady_clock::now();
  const auto suite = ex::execute_sector_suite(config);
  std::fprintf(stderr, "  [sectors_n5] %.1f s\n",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  std::vector<Index> dims;
  for (const auto& s : suite.sectors) dims.push_back(s.dim);
  const bool dims_ok = dims == std::vector<Index>{1, 5, 10, 10, 5, 1};
  double worst = 0.0;
  bool sizes_match = suite.sector_energies.size() == suite.full_energies.size();
  if (sizes_match) worst = (suite.sector_energies - suite.full_energies).cwiseAbs().maxCoeff();
  const bool spectrum_ok = sizes_match && worst <= kSpectrumMatch;

  std::ostringstream dim_text;
  for (std::size_t i = 0; i < dims.size(); ++i) dim_text << (i ? "," : "") << dims[i];
  return {5, membership && dims_ok && spectrum_ok,
          fmt("N=5 integrated-infidelity groups of sizes %d/%d/%d (expected 2/10/20), membership %s; "
              "sector dims (%s); sector-union vs full spectrum max diff %.2e (tol %.0e)",
              sizes[0], sizes[1], sizes[2], membership ? "matches" : "MISMATCH", dim_text.str().c_str(), worst,
              kSpectrumMatch)};
}

Line criterion6() {
  const auto report = ex::post_select_report(g_root / "pairing_n5", 0.02);
  const double ratio = report.selected_stats.mean_distance / report.unselected_stats.mean_distance;
  const std::set<double> checked = {0.005, 0.01, 0.02, 0.05};
  std::vector<metrics::DistanceStats> sweep;
  for (const auto& s : report.sweep)
    if (checked.count(s.sigma_th)) sweep.push_back(s);
  bool monotone = sweep.size() == checked.size();
  std::ostringstream text;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    text << fmt("%g:%.2e(%lld) ", sweep[i].sigma_th, sweep[i].mean_distance, static_cast<long long>(sweep[i].count));
    if (i + 1 < sweep.size()) {
      const double allowance = std::max(sweep[i].std_error, sweep[i + 1].std_error);
      monotone = monotone && sweep[i].mean_distance <= sweep[i + 1].mean_distance + allowance;
    }
  }
  const bool pass = report.selected_stats.count > 0 && ratio <= kSelectionRatio && monotone &&
                    report.selected.size() < report.all.size();
  return {6, pass,
          fmt("N=5 sigma_th=0.02: %zu of %zu selected, distance selected %.3e vs all %.3e (ratio %.3f, limit %.1f); "
              "sweep %s%s",
              report.selected.size(), report.all.size(), report.selected_stats.mean_distance,
              report.unselected_stats.mean_distance, ratio, kSelectionRatio, text.str().c_str(),
              monotone ? "non-increasing as sigma_th shrinks" : "NOT monotone")};
}

Line criterion7() {
  RandomStream rng(derive_seed(2024, 7, StreamPurpose::kModel));
  double worst_survival = 0, worst_sigma = 0, worst_fid = 0, worst_evolve = 0;
  int cases = 0;
  for (; cases < kOracleCases; ++cases) {
    const Index d = 2 + cases % (kOracleMaxDim - 1);
    const ComplexMatrix h = models::rescale(oracle::random_hermitian(d, rng)).h_tilde;
    const Spectrum spec = quantum::eig_hermitian(h);
    const double tau = rng.uniform(0.0, 600.0);
    const ComplexMatrix u_ref = oracle::expm(Complex(0, -tau) * h);
    const StateVector psi = oracle::random_state(d, rng);

    worst_survival = std::max(worst_survival,
                              std::abs(quantum::survival_probability(spec, psi, tau) - std::norm(psi.dot(u_ref * psi))));
    worst_evolve = std::max(worst_evolve, max_abs_diff(quantum::evolve_unitary(spec, tau), u_ref));

    const ComplexMatrix dmat = oracle::random_unitary(d, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    for (Index j = 0; j < d; ++j) {
      const StateVector c = es.eigenvectors().adjoint() * dmat.col(j);
      double m1 = 0, m2 = 0;
      for (Index a = 0; a < d; ++a) {
        m1 += std::norm(c(a)) * es.eigenvalues()(a);
        m2 += std::norm(c(a)) * es.eigenvalues()(a) * es.eigenvalues()(a);
      }
      worst_sigma = std::max(worst_sigma, std::abs(metrics::energy_fluctuation(dmat, h, j) -
                                                   std::sqrt(std::max(m2 - m1 * m1, 0.0))));
      double best = 0;
      for (Index a = 0; a < d; ++a) best = std::max(best, std::abs(spec.eigenvectors.col(a).dot(dmat.col(j))));
      worst_fid = std::max(worst_fid, std::abs(metrics::fidelity(dmat, spec, j) - best));
    }
  }
  const bool pass = worst_survival <= kSurvivalTol && worst_sigma <= kFluctuationTol && worst_fid <= kFidelityTol &&
                    worst_evolve <= kEvolveTol;
  return {7, pass,
          fmt("%d cases, d in [2, %lld]: survival %.1e (tol %.0e), sigma %.1e (tol %.0e), fidelity %.1e (tol %.0e), "
              "evolve_unitary %.1e (tol %.0e)",
              cases, static_cast<long long>(kOracleMaxDim), worst_survival, kSurvivalTol, worst_sigma, kFluctuationTol,
              worst_fid, kFidelityTol, worst_evolve, kEvolveTol)};
}

Line criterion8() {
  auto config = ex::preset("fig6-n4");
  auto agent_config = ex::resolve_agent_config(config);
  agent_config.seed = derive_seed(config.master_seed, 0, StreamPurpose::kAgent);
  const auto model = ex::build_fixed_model(config);
  const double r2 = agent_config.reward_rate * agent_config.reward_rate;

  double worst_unitarity = 0.0;
  bool w_in_range = true, reward_exact = true;
  std::int64_t all_reward = 0, iterations = 0;
  agent::ExplorationTable previous = agent::init(model.dim(), agent_config).w;
  agent::run_realization(model, agent_config, [&](const agent::AgentState& s, const agent::IterationRecord& rec,
                                                  agent::Status status) {
    ++iterations;
    worst_unitarity = std::max(worst_unitarity, unitarity_residual(s.unitary));
    for (double w : s.w.values()) w_in_range = w_in_range && w > 0.0 && w <= 1.0;
    const bool every_reward = std::all_of(rec.pair_cases.begin(), rec.pair_cases.end(),
                                          [](agent::PairCase c) { return c == agent::PairCase::kDoubleReward; });
    if (every_reward && status != agent::Status::kResetApplied) {
      ++all_reward;
      for (std::size_t i = 0; i < previous.values().size(); ++i)
        reward_exact = reward_exact && s.w.values()[i] == r2 * previous.values()[i];
    }
    previous = s.w;
  });

  ComplexMatrix diag = ComplexMatrix::Zero(8, 8);
  for (Index i = 0; i < 8; ++i) diag(i, i) = 0.1 * static_cast<double>(i * i);
  const auto diag_model = models::make_model(models::ModelKind::kRandom, {3, 8, 0, 0, 0, 0}, diag);
  auto diag_config = agent_config;
  diag_config.reset_enabled = false;
  const auto diag_run = agent::run_realization(diag_model, diag_config);
  const auto closed_form = static_cast<std::int64_t>(std::ceil(std::log(diag_config.w_threshold) / std::log(r2)));

  const bool pass = worst_unitarity <= kUnitarityTol && w_in_range && reward_exact && all_reward > 0 &&
                    diag_run.converged && diag_run.iterations == closed_form;
  return {8, pass,
          fmt("N=4 pairing, %lld iterations: max unitarity residual %.2e (tol %.0e); w in (0,1] %s; %lld all-reward "
              "iterations, w scaled by exactly r^2 %s; diagonal H converged in %lld iterations (closed form %lld)",
              static_cast<long long>(iterations), worst_unitarity, kUnitarityTol, w_in_range ? "always" : "VIOLATED",
              static_cast<long long>(all_reward), reward_exact ? "always" : "NOT always",
              static_cast<long long>(diag_run.iterations), static_cast<long long>(closed_form))};
}

std::vector<std::pair<std::string, std::string>> csv_snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") {
      files.emplace_back(fs::relative(entry.path(), dir).string(), io::read_text_file(entry.path()));
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

Line criterion9() {
  int identical = 0, compared = 0;
  std::vector<std::string> differing;
  for (const auto& name : ex::preset_names()) {
    std::vector<std::vector<std::pair<std::string, std::string>>> snapshots;
    for (int workers : {1, 4, 4}) {
      auto config = ex::preset(name);
      config.realizations = 5;
      config.max_iterations = 300;
      config.decay_start = 180;
      config.workers = workers;
      config.output_dir = g_root / "determinism" / (name + "_w" + std::to_string(workers) + "_" +
                                                    std::to_string(snapshots.size()));
      if (ex::preset_is_sector_suite(name)) {
        ex::execute_sector_suite(config);
      } else {
        ex::execute_experiment(config);
      }
      snapshots.push_back(csv_snapshot(config.output_dir));
    }
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
      ++compared;
      if (snapshots[i] == snapshots[0] && !snapshots[0].empty()) {
        ++identical;
      } else {
        differing.push_back(name);
      }
    }
  }
  std::string bad;
  for (const auto& d : differing) bad += " " + d;
  return {9, identical == compared,
          fmt("%d/%d repeated runs (all %zu presets, worker counts 1 vs 4 and 4 vs 4) byte-identical across every CSV%s",
              identical, compared, ex::preset_names().size(), bad.empty() ? "" : ("; differing:" + bad).c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  g_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fixpointrl_acceptance";
  fs::remove_all(g_root);
  fs::create_directories(g_root);

  const std::vector<std::function<Line()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                        criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line line;
    try {
      line = criteria[i]();
    } catch (const std::exception& e) {
      line = {static_cast<int>(i + 1), false, std::string("exception: ") + e.what()};
    }
    failures += !line.pass;
    std::printf("criterion %d: %s: %s\n", line.id, line.pass ? "PASS" : "FAIL", line.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu criteria, %d failed\n", criteria.size(), failures);
  return failures;
}
