#include "fixpointrl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "fixpointrl/csv_io.hpp"
#include "fixpointrl/errors.hpp"
#include "fixpointrl/quantum.hpp"
#include "fixpointrl/random_stream.hpp"
#include "fixpointrl/svg_plot.hpp"

namespace fixpointrl::experiments {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kFidelityHeader = {"iteration", "state_index", "mean_fidelity"};
const std::vector<std::string> kExplorationHeader = {"iteration", "mean_w_max"};
const std::vector<std::string> kEnergiesHeader = {"realization", "state_index", "energy", "sigma"};
const std::vector<std::string> kSpectrumHeader = {"alpha", "exact_energy", "degeneracy_cluster"};
const std::vector<std::string> kSweepHeader = {"sigma_th", "mean_distance", "std_error", "count"};

constexpr int kTrajectoryDigits = 12;
constexpr const char* kSeedDerivation =
    "stream key = mix64(master ^ mix64(mix64(index) + purpose * 0x9E3779B97F4A7C15)), "
    "purpose agent=1 model=2 sector=3; SplitMix64 counter stream";

std::string iso_time_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

json config_json(const ExperimentConfig& config) {
  json j = json::object();
  for (const auto& [key, value] : config_entries(config)) j[key] = value;
  return j;
}

json agent_json(const agent::AgentConfig& a) {
  return json{{"r", a.reward_rate},         {"p", a.punishment_rate},
              {"w_th", a.w_threshold},      {"reset", a.reset_enabled},
              {"w_r", a.w_reset},           {"k0", a.decay_start},
              {"k_max", a.max_iterations},  {"tau_min", a.tau_min},
              {"tau_max", a.tau_max}};
}

void write_spectrum_csv(const fs::path& path, const Spectrum& spec) {
  io::CsvWriter csv(kSpectrumHeader);
  const auto clusters = metrics::degeneracy_clusters(spec, tol::kDegeneracy);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (Index a = clusters[c].first; a < clusters[c].second; ++a) {
      csv.integer(a).real(spec.energies(a)).integer(static_cast<long long>(c));
      csv.end_row();
    }
  }
  csv.save(path);
}

void write_fidelity_csv(const fs::path& path, const metrics::AggregateResult& agg) {
  io::CsvWriter csv(kFidelityHeader);
  for (std::int64_t k = 0; k < agg.length; ++k) {
    for (Index j = 0; j < agg.dim; ++j) {
      csv.integer(k + 1).integer(j).real(agg.fidelity_at(k, j), kTrajectoryDigits);
      csv.end_row();
    }
  }
  csv.save(path);
}

void write_exploration_csv(const fs::path& path, const metrics::AggregateResult& agg) {
  io::CsvWriter csv(kExplorationHeader);
  for (std::int64_t k = 0; k < agg.length; ++k) {
    csv.integer(k + 1).real(agg.mean_w_max[static_cast<std::size_t>(k)], kTrajectoryDigits);
    csv.end_row();
  }
  csv.save(path);
}

void write_energies_csv(const fs::path& path, const std::vector<metrics::SelectedState>& states) {
  io::CsvWriter csv(kEnergiesHeader);
  for (const auto& s : states) {
    csv.integer(s.realization_index).integer(s.state_index).real(s.energy).real(s.sigma);
    csv.end_row();
  }
  csv.save(path);
}

void log_line(std::ostream* progress, const std::string& text) {
  if (progress) *progress << text << std::endl;
}

}  // namespace

const std::vector<double>& default_sweep_thresholds() {
  static const std::vector<double> thresholds = {0.005, 0.01, 0.02, 0.05, 0.1};
  return thresholds;
}

metrics::RealizationResult simulate_realization(const models::HamiltonianModel& model,
                                                const agent::AgentConfig& config,
                                                std::int64_t index) {
  metrics::RealizationResult result;
  result.realization_index = index;
  result.dim = model.dim();
  const auto d = static_cast<std::size_t>(model.dim());
  result.fidelity_trajectory.reserve(static_cast<std::size_t>(config.max_iterations) * d);
  result.w_max_trajectory.reserve(static_cast<std::size_t>(config.max_iterations));

  const agent::RealizationRun run = agent::run_realization(
      model, config,
      [&](const agent::AgentState& state, const agent::IterationRecord& record, agent::Status) {
        const RealVector f = metrics::fidelities(state.unitary, model.spectrum);
        result.fidelity_trajectory.insert(result.fidelity_trajectory.end(), f.data(), f.data() + f.size());
        result.w_max_trajectory.push_back(record.w_max);
      });

  const ComplexMatrix& unitary = run.final_state.unitary;
  const RealVector f = metrics::fidelities(unitary, model.spectrum);
  result.final_fidelities.assign(f.data(), f.data() + f.size());
  for (Index j = 0; j < model.dim(); ++j) {
    const auto moments = metrics::energy_moments(unitary, model.rescaled, j);
    result.final_energies.push_back(moments.mean);
    result.final_sigmas.push_back(moments.sigma);
  }
  result.iterations_to_converge = run.iterations;
  result.converged = run.converged;
  return result;
}

int ExperimentOutcome::exit_status() const {
  // Nonzero only when more than 10% of the realizations failed.
  return static_cast<double>(failures.size()) > 0.1 * static_cast<double>(requested) ? 1 : 0;
}

models::HamiltonianModel build_fixed_model(const ExperimentConfig& config) {
  models::HamiltonianModel model;
  switch (config.model) {
    case models::ModelKind::kTfim:
      model = models::build_tfim(config.qubits, config.j_over_h, config.k_over_h);
      break;
    case models::ModelKind::kPairing:
      model = models::build_pairing(config.qubits, config.g_over_de);
      break;
    case models::ModelKind::kRandom:
      throw ConfigError("random models are rebuilt per realization");
  }
  if (config.sector) model = models::sector_restrict(model, *config.sector);
  return model;
}

ExperimentOutcome run_realizations(const ExperimentConfig& config, std::ostream* progress) {
  validate(config);
  const agent::AgentConfig base_agent = resolve_agent_config(config);
  const bool random_model = config.model == models::ModelKind::kRandom;

  std::optional<models::HamiltonianModel> fixed;
  if (!random_model) {
    fixed = build_fixed_model(config);
    if (fixed->dim() < 2) {
      throw ConfigError("sector " + std::to_string(*config.sector) +
                        " has dimension 1; its single state is exact, nothing to learn");
    }
  }

  const std::int64_t count = config.realizations;
  struct Slot {
    bool done = false;
    std::optional<metrics::RealizationResult> result;
    std::string error;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(count));
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::int64_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      Slot slot;
      try {
        agent::AgentConfig agent_config = base_agent;
        agent_config.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(i),
                                        StreamPurpose::kAgent);
        if (random_model) {
          RandomStream model_rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(i),
                                             StreamPurpose::kModel));
          const auto model = models::build_random(Index{1} << config.qubits, model_rng);
          slot.result = simulate_realization(model, agent_config, i);
        } else {
          slot.result = simulate_realization(*fixed, agent_config, i);
        }
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
      slot.done = true;
      {
        std::lock_guard lock(mutex);
        slots[static_cast<std::size_t>(i)] = std::move(slot);
      }
      ready.notify_all();
    }
  };

  unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, count));
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);

  ExperimentOutcome outcome;
  outcome.requested = count;
  const Index dim = random_model ? (Index{1} << config.qubits) : fixed->dim();
  metrics::TrajectoryAccumulator acc(dim);
  for (std::int64_t i = 0; i < count; ++i) {
    Slot slot;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return slots[static_cast<std::size_t>(i)].done; });
      slot = std::move(slots[static_cast<std::size_t>(i)]);
    }
    if (!slot.result) {
      outcome.failures.push_back({i, slot.error});
      log_line(progress, "realization " + std::to_string(i) + " failed: " + slot.error);
      continue;
    }
    acc.add(*slot.result);
    slot.result->fidelity_trajectory = {};
    slot.result->w_max_trajectory = {};
    outcome.results.push_back(std::move(*slot.result));
    if (progress && ((i + 1) % 10 == 0 || i + 1 == count)) {
      *progress << "  realization " << (i + 1) << "/" << count << std::endl;
    }
  }
  pool.clear();

  if (acc.count() > 0) outcome.aggregate = acc.finish();
  if (fixed) outcome.exact_energies = fixed->spectrum.energies;
  return outcome;
}

namespace {

void write_run_outputs(const ExperimentConfig& config, const ExperimentOutcome& outcome,
                       const std::optional<models::HamiltonianModel>& fixed, double seconds,
                       const std::string& started) {
  const fs::path& dir = config.output_dir;
  if (outcome.aggregate.realizations > 0) {
    write_fidelity_csv(dir / "fidelity.csv", outcome.aggregate);
    write_exploration_csv(dir / "exploration.csv", outcome.aggregate);
  } else {
    io::CsvWriter(kFidelityHeader).save(dir / "fidelity.csv");
    io::CsvWriter(kExplorationHeader).save(dir / "exploration.csv");
  }
  write_energies_csv(dir / "energies.csv", metrics::final_states(outcome.results));
  if (fixed) write_spectrum_csv(dir / "spectrum.csv", fixed->spectrum);

  io::CsvWriter runs({"realization", "iterations", "converged"});
  for (const auto& r : outcome.results) {
    runs.integer(r.realization_index).integer(r.iterations_to_converge).integer(r.converged ? 1 : 0);
    runs.end_row();
  }
  runs.save(dir / "realizations.csv");

  io::write_text_file(dir / "config.txt", to_text(config));

  json meta;
  meta["format"] = kMetadataFormat;
  meta["tool_version"] = FIXPOINTRL_VERSION;
  meta["command"] = "run";
  meta["started_utc"] = started;
  meta["wall_clock_seconds"] = seconds;
  meta["config"] = config_json(config);
  meta["agent"] = agent_json(resolve_agent_config(config));
  meta["seed_derivation"] = kSeedDerivation;
  json model;
  model["kind"] = models::to_string(config.model);
  model["dimension"] = outcome.aggregate.dim;
  if (fixed) {
    model["e_min"] = fixed->e_min;
    model["e_max"] = fixed->e_max;
    if (fixed->sector) model["hamming_weight"] = fixed->sector->hamming_weight;
  } else {
    model["ensemble"] = "H = (A + A^dagger)/2, A entries complex Gaussian with unit variance; fresh per realization";
  }
  meta["model"] = model;
  json plateau;
  plateau["window_fraction"] = metrics::kPlateauFraction;
  plateau["definition"] = "mean over the final window of the padded mean-fidelity curves, extremized over states";
  if (outcome.aggregate.realizations > 0) {
    plateau["f_max"] = outcome.aggregate.f_max;
    plateau["f_min"] = outcome.aggregate.f_min;
    plateau["per_state"] = std::vector<double>(outcome.aggregate.plateau.data(),
                                               outcome.aggregate.plateau.data() + outcome.aggregate.plateau.size());
    plateau["iterations"] = outcome.aggregate.length;
  }
  meta["plateau"] = plateau;
  json failures = json::array();
  for (const auto& f : outcome.failures) failures.push_back({{"index", f.index}, {"error", f.message}});
  meta["realizations"] = {{"requested", outcome.requested},
                          {"succeeded", outcome.results.size()},
                          {"failed", failures}};
  meta["exit_status"] = outcome.exit_status();
  io::write_text_file(dir / "metadata.json", meta.dump(2) + "\n");
}

}  // namespace

ExperimentOutcome execute_experiment(const ExperimentConfig& config, std::ostream* progress) {
  validate(config);
  prepare_output_dir(config.output_dir);
  const std::string started = iso_time_now();
  const auto t0 = std::chrono::steady_clock::now();

  std::optional<models::HamiltonianModel> fixed;
  if (config.model != models::ModelKind::kRandom) fixed = build_fixed_model(config);

  log_line(progress, "running " + std::to_string(config.realizations) + " realization(s) of " +
                         models::to_string(config.model) + " -> " + config.output_dir.string());
  ExperimentOutcome outcome = run_realizations(config, progress);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_run_outputs(config, outcome, fixed, seconds, started);

  if (config.sigma_th && fixed && !outcome.results.empty()) {
    post_select_report(config.output_dir, *config.sigma_th);
  }
  if (config.emit_plots && !outcome.results.empty()) emit_plots(config.output_dir, config.sigma_th);
  return outcome;
}

int run_experiment(const ExperimentConfig& config, std::ostream* progress) {
  return execute_experiment(config, progress).exit_status();
}

int SectorSuiteOutcome::exit_status() const {
  int status = 0;
  for (const auto& s : sectors) status = std::max(status, s.exit_status);
  return status;
}

SectorSuiteOutcome execute_sector_suite(const ExperimentConfig& config, std::ostream* progress) {
  if (config.model != models::ModelKind::kPairing) {
    throw ConfigError("the sector suite needs model = pairing");
  }
  ExperimentConfig base = config;
  base.sector.reset();
  validate(base);
  prepare_output_dir(config.output_dir);
  const std::string started = iso_time_now();
  const auto t0 = std::chrono::steady_clock::now();

  const models::HamiltonianModel full = build_fixed_model(base);
  const double full_width = full.e_max - full.e_min;
  auto to_full = [&](const models::HamiltonianModel& sector, double e) {
    return (sector.to_raw_energy(e) - full.e_min) / full_width;
  };

  SectorSuiteOutcome suite;
  suite.full_energies = full.spectrum.energies;
  std::vector<double> union_energies;
  std::vector<std::pair<int, metrics::SelectedState>> tagged;  // (weight, state)
  std::vector<metrics::AggregateResult> aggregates;
  std::vector<models::HamiltonianModel> sector_models;
  json sector_meta = json::array();

  for (int w = 0; w <= config.qubits; ++w) {
    models::HamiltonianModel sector = models::sector_restrict(full, w);
    const auto& basis = sector.sector->basis_indices;
    for (Index a = 0; a < sector.dim(); ++a) union_energies.push_back(to_full(sector, sector.spectrum.energies(a)));

    SectorRun run;
    run.weight = w;
    run.dim = sector.dim();
    json entry = {{"weight", w}, {"dimension", sector.dim()}};
    if (sector.dim() == 1) {
      run.exact = true;
      for (std::int64_t r = 0; r < config.realizations; ++r) {
        tagged.push_back({w, {r, basis[0], to_full(sector, 0.0), 0.0}});
      }
      entry["exact"] = true;
      aggregates.emplace_back();
    } else {
      ExperimentConfig sub = base;
      sub.preset.clear();
      sub.sector = w;
      sub.output_dir = config.output_dir / ("sector_w" + std::to_string(w));
      sub.master_seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(w), StreamPurpose::kSector);
      sub.emit_plots = false;
      sub.sigma_th.reset();
      log_line(progress, "sector weight " + std::to_string(w) + " (dimension " + std::to_string(sector.dim()) + ")");
      ExperimentOutcome out = execute_experiment(sub, progress);
      run.f_max = out.aggregate.f_max;
      run.f_min = out.aggregate.f_min;
      run.exit_status = out.exit_status();
      const double sigma_scale = (sector.e_max - sector.e_min) / full_width;
      for (const auto& s : metrics::final_states(out.results)) {
        tagged.push_back({w, {s.realization_index, basis[s.state_index], to_full(sector, s.energy),
                              s.sigma * sigma_scale}});
      }
      entry["exact"] = false;
      entry["output_dir"] = sub.output_dir.filename().string();
      entry["master_seed"] = sub.master_seed;
      entry["f_max"] = run.f_max;
      entry["f_min"] = run.f_min;
      entry["exit_status"] = run.exit_status;
      aggregates.push_back(std::move(out.aggregate));
    }
    sector_models.push_back(std::move(sector));
    sector_meta.push_back(entry);
    suite.sectors.push_back(run);
  }

  std::sort(union_energies.begin(), union_energies.end());
  suite.sector_energies = Eigen::Map<RealVector>(union_energies.data(), static_cast<Index>(union_energies.size()));

  std::stable_sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) {
    return a.second.realization_index != b.second.realization_index
               ? a.second.realization_index < b.second.realization_index
               : a.second.state_index < b.second.state_index;
  });
  io::CsvWriter sector_csv({"weight", "realization", "state_index", "energy", "sigma"});
  for (const auto& [w, s] : tagged) {
    suite.combined.push_back(s);
    sector_csv.integer(w).integer(s.realization_index).integer(s.state_index).real(s.energy).real(s.sigma);
    sector_csv.end_row();
  }
  const fs::path& dir = config.output_dir;
  sector_csv.save(dir / "sector_energies.csv");
  write_energies_csv(dir / "energies.csv", suite.combined);
  write_spectrum_csv(dir / "spectrum.csv", full.spectrum);

  // Combined fidelity curves: each sector's mean curves placed at their full
  // basis indices, padded by the last value to the longest sector run.
  std::int64_t length = 1;
  for (const auto& agg : aggregates) length = std::max(length, agg.length);
  const Index d = full.dim();
  std::vector<double> combined(static_cast<std::size_t>(length * d), 1.0);
  for (std::size_t s = 0; s < aggregates.size(); ++s) {
    const auto& agg = aggregates[s];
    if (agg.length == 0) continue;
    const auto& basis = sector_models[s].sector->basis_indices;
    for (std::int64_t k = 0; k < length; ++k) {
      const std::int64_t src = std::min(k, agg.length - 1);
      for (Index j = 0; j < agg.dim; ++j) {
        combined[static_cast<std::size_t>(k * d + basis[j])] = agg.fidelity_at(src, j);
      }
    }
  }
  io::CsvWriter fid(kFidelityHeader);
  for (std::int64_t k = 0; k < length; ++k) {
    for (Index j = 0; j < d; ++j) {
      fid.integer(k + 1).integer(j).real(combined[static_cast<std::size_t>(k * d + j)], kTrajectoryDigits);
      fid.end_row();
    }
  }
  fid.save(dir / "fidelity.csv");

  io::CsvWriter sectors_csv({"weight", "dimension", "f_max", "f_min"});
  for (const auto& s : suite.sectors) {
    sectors_csv.integer(s.weight).integer(s.dim).real(s.f_max).real(s.f_min);
    sectors_csv.end_row();
  }
  sectors_csv.save(dir / "sectors.csv");
  io::write_text_file(dir / "config.txt", to_text(config));

  json meta;
  meta["format"] = kMetadataFormat;
  meta["tool_version"] = FIXPOINTRL_VERSION;
  meta["command"] = "sectors";
  meta["started_utc"] = started;
  meta["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  meta["config"] = config_json(config);
  meta["agent"] = agent_json(resolve_agent_config(base));
  meta["seed_derivation"] = std::string(kSeedDerivation) + "; sector master = derive(master, weight, sector)";
  meta["model"] = {{"kind", "pairing"}, {"dimension", d}, {"e_min", full.e_min}, {"e_max", full.e_max}};
  meta["energy_units"] = "full-space rescaled energies; sigma rescaled by the same factor";
  meta["sectors"] = sector_meta;
  meta["exit_status"] = suite.exit_status();
  io::write_text_file(dir / "metadata.json", meta.dump(2) + "\n");

  if (config.sigma_th) post_select_report(dir, *config.sigma_th);
  if (config.emit_plots) emit_plots(dir, config.sigma_th);
  return suite;
}

int run_sector_suite(const ExperimentConfig& config, std::ostream* progress) {
  return execute_sector_suite(config, progress).exit_status();
}

PostSelectReport post_select_report(const fs::path& dir, double sigma_th) {
  if (!(sigma_th > 0.0)) throw ConfigError("sigma-th must be positive");
  const io::CsvTable energies = io::read_csv(dir / "energies.csv", kEnergiesHeader);
  const io::CsvTable spectrum = io::read_csv(dir / "spectrum.csv", kSpectrumHeader);
  if (spectrum.rows.empty()) throw IoError((dir / "spectrum.csv").string() + ": no eigenvalues");

  PostSelectReport report;
  for (const auto& row : energies.rows) {
    report.all.push_back({static_cast<std::int64_t>(row[0]), static_cast<Index>(row[1]), row[2], row[3]});
  }
  RealVector exact(static_cast<Index>(spectrum.rows.size()));
  for (std::size_t a = 0; a < spectrum.rows.size(); ++a) exact(static_cast<Index>(a)) = spectrum.rows[a][1];

  report.selected = metrics::post_select(report.all, sigma_th);
  report.selected_stats = metrics::distance_stats(report.all, exact, sigma_th);
  report.unselected_stats = metrics::distance_stats(report.all, exact, std::numeric_limits<double>::infinity());

  std::set<double> thresholds(default_sweep_thresholds().begin(), default_sweep_thresholds().end());
  thresholds.insert(sigma_th);
  report.sweep = metrics::distance_sweep(report.all, exact, {thresholds.begin(), thresholds.end()});

  write_energies_csv(dir / "selected.csv", report.selected);
  io::CsvWriter sweep(kSweepHeader);
  for (const auto& s : report.sweep) {
    sweep.real(s.sigma_th).real(s.mean_distance).real(s.std_error).integer(s.count);
    sweep.end_row();
  }
  sweep.save(dir / "distance_sweep.csv");
  return report;
}

namespace {

// Keep polylines to a readable number of vertices.
constexpr std::size_t kMaxLinePoints = 1500;

}  // namespace

std::vector<fs::path> emit_plots(const fs::path& dir, std::optional<double> sigma_th) {
  const io::CsvTable fidelity = io::read_csv(dir / "fidelity.csv", kFidelityHeader);
  std::optional<io::CsvTable> exploration, energies, spectrum;
  if (fs::exists(dir / "exploration.csv")) exploration = io::read_csv(dir / "exploration.csv", kExplorationHeader);
  if (fs::exists(dir / "energies.csv")) energies = io::read_csv(dir / "energies.csv", kEnergiesHeader);
  if (fs::exists(dir / "spectrum.csv")) spectrum = io::read_csv(dir / "spectrum.csv", kSpectrumHeader);
  if (fidelity.rows.empty() || (energies && energies->rows.empty())) {
    throw IoError("no data in " + dir.string() + ": nothing to plot");
  }

  // Fidelity curves per state.
  std::map<Index, std::pair<std::vector<double>, std::vector<double>>> curves;
  for (const auto& row : fidelity.rows) {
    auto& [x, y] = curves[static_cast<Index>(row[1])];
    x.push_back(row[0]);
    y.push_back(row[2]);
  }
  plot::SvgChart fid_chart("Mean fidelity per computational-basis state", "iteration k",
                           "F_k^(j)");
  double f_max = 0.0, f_min = 1.0;
  std::size_t color = 0;
  for (auto& [state, xy] : curves) {
    auto& [x, y] = xy;
    const std::size_t n = x.size();
    const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(metrics::kPlateauFraction * n)));
    double plateau = 0.0;
    for (std::size_t i = n - window; i < n; ++i) plateau += y[i];
    plateau /= static_cast<double>(window);
    f_max = std::max(f_max, plateau);
    f_min = std::min(f_min, plateau);
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxLinePoints);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; i += stride) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
    if (xs.back() != x.back()) {
      xs.push_back(x.back());
      ys.push_back(y.back());
    }
    fid_chart.add_line(xs, ys, plot::palette(color++));
  }
  char label[64];
  std::snprintf(label, sizeof label, "F_max = %.4f", f_max);
  fid_chart.add_hline(f_max, "black", true, label);
  std::snprintf(label, sizeof label, "F_min = %.4f", f_min);
  fid_chart.add_hline(f_min, "black", true, label);

  std::vector<std::pair<fs::path, std::string>> outputs;
  outputs.emplace_back(dir / "fidelity.svg", fid_chart.render());

  if (exploration && !exploration->rows.empty()) {
    plot::SvgChart chart("Mean maximum exploration parameter", "iteration k", "W_k^(M)");
    chart.set_log_y(true);
    const std::size_t n = exploration->rows.size();
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxLinePoints);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; i += stride) {
      xs.push_back(exploration->rows[i][0]);
      ys.push_back(exploration->rows[i][1]);
    }
    chart.add_line(xs, ys, plot::palette(0));
    outputs.emplace_back(dir / "exploration.svg", chart.render());
  }

  if (energies) {
    plot::SvgChart e_chart("Final energy expectation per realization", "realization", "<H~>_j");
    plot::SvgChart s_chart("Final energy fluctuation per realization", "realization", "sigma_j");
    std::map<Index, std::pair<std::vector<double>, std::vector<double>>> e_by_state, s_by_state;
    for (const auto& row : energies->rows) {
      const auto state = static_cast<Index>(row[1]);
      e_by_state[state].first.push_back(row[0]);
      e_by_state[state].second.push_back(row[2]);
      s_by_state[state].first.push_back(row[0]);
      s_by_state[state].second.push_back(row[3]);
    }
    std::size_t c = 0;
    for (const auto& [state, xy] : e_by_state) e_chart.add_scatter(xy.first, xy.second, plot::palette(c++));
    c = 0;
    for (const auto& [state, xy] : s_by_state) s_chart.add_scatter(xy.first, xy.second, plot::palette(c++));
    if (spectrum) {
      for (const auto& row : spectrum->rows) e_chart.add_hline(row[1], "#444444", false);
    }
    if (sigma_th) s_chart.add_hline(*sigma_th, "black", true, "sigma_th");
    outputs.emplace_back(dir / "energies.svg", e_chart.render());
    outputs.emplace_back(dir / "sigma.svg", s_chart.render());
  }

  std::vector<fs::path> written;
  for (const auto& [path, text] : outputs) {
    io::write_text_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace fixpointrl::experiments
