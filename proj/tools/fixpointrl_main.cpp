#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fixpointrl/config.hpp"
#include "fixpointrl/csv_io.hpp"
#include "fixpointrl/errors.hpp"
#include "fixpointrl/experiment.hpp"
#include "fixpointrl/hamiltonians.hpp"

namespace fx = fixpointrl;
namespace ex = fixpointrl::experiments;

namespace {

enum ExitCode { kOk = 0, kRunFailed = 1, kUsage = 2, kIo = 3, kNumerical = 4 };

struct ConfigOptions {
  std::string preset;
  std::string config_file;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> flags;
  std::string dump_hamiltonian;
};

void add_config_options(CLI::App& cmd, ConfigOptions& opts) {
  cmd.add_option("--preset", opts.preset, "Named parameter set (see `fixpointrl presets`)");
  cmd.add_option("--config", opts.config_file, "key = value config file");
  cmd.add_option("--override", opts.overrides, "key=value applied last")->allow_extra_args(false);
  cmd.add_option("--dump-hamiltonian", opts.dump_hamiltonian,
                 "Write the (raw) model Hamiltonian to FILE before running");
  for (const auto& key : ex::config_keys()) {
    if (key == "preset") continue;
    cmd.add_option("--" + key, opts.flags[key], "config key '" + key + "'");
  }
}

// preset < config file < explicit flags < overrides
ex::ExperimentConfig assemble(const CLI::App& cmd, const ConfigOptions& opts) {
  ex::ExperimentConfig config;
  if (!opts.preset.empty()) config = ex::preset(opts.preset);
  if (!opts.config_file.empty()) {
    const std::string text = fx::io::read_text_file(opts.config_file);
    const auto from_file = ex::parse_config_text(text);
    if (opts.preset.empty() && !from_file.preset.empty()) config = ex::preset(from_file.preset);
    config = ex::parse_config_text(text, config);
  }
  for (const auto& [key, value] : opts.flags) {
    if (cmd.count("--" + key) > 0) ex::apply_setting(config, key, value);
  }
  for (const auto& o : opts.overrides) ex::apply_override(config, o);
  return config;
}

void dump_hamiltonian(const ex::ExperimentConfig& config, const std::string& path) {
  fx::models::HamiltonianModel model;
  if (config.model == fx::models::ModelKind::kRandom) {
    // Realization 0 of the run.
    fx::RandomStream rng(fx::derive_seed(config.master_seed, 0, fx::StreamPurpose::kModel));
    model = fx::models::build_random(fx::Index{1} << config.qubits, rng);
  } else {
    model = ex::build_fixed_model(config);
  }
  std::ofstream out(path);
  if (!out) throw fx::IoError("cannot write " + path);
  fx::models::write_model(out, model);
  if (!out) throw fx::IoError("write failed: " + path);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const fx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const fx::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kUsage;
  } catch (const fx::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const fx::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-point reinforcement learning of Hamiltonian eigenstates"};
  app.set_version_flag("--version", std::string(FIXPOINTRL_VERSION));
  app.require_subcommand(1);

  ConfigOptions run_opts, sector_opts;
  auto* run = app.add_subcommand("run", "Run an experiment");
  add_config_options(*run, run_opts);
  auto* sectors = app.add_subcommand("sectors", "Run RL separately in every Hamming-weight sector (pairing)");
  add_config_options(*sectors, sector_opts);

  std::string in_dir;
  double sigma_th = 0.0;
  auto* postselect = app.add_subcommand("postselect", "Filter a completed run by energy fluctuation");
  postselect->add_option("--in", in_dir, "Results directory")->required();
  postselect->add_option("--sigma-th", sigma_th, "Fluctuation threshold")->required();

  std::string plot_dir;
  std::optional<double> plot_sigma;
  auto* plot = app.add_subcommand("plot", "Render SVG panels for a completed run");
  plot->add_option("--in", plot_dir, "Results directory")->required();
  plot->add_option("--sigma-th", plot_sigma, "Threshold line on the sigma panel");

  auto* presets = app.add_subcommand("presets", "List preset names");
  auto* show = app.add_subcommand("show-config", "Print the resolved configuration");
  ConfigOptions show_opts;
  add_config_options(*show, show_opts);

  CLI11_PARSE(app, argc, argv);

  if (*presets) {
    for (const auto& name : ex::preset_names()) std::cout << name << "\n";
    return kOk;
  }
  if (*show) {
    return guarded([&] {
      const auto config = assemble(*show, show_opts);
      ex::validate(config);
      std::cout << ex::to_text(config);
      return int{kOk};
    });
  }
  if (*run || *sectors) {
    const bool suite_cmd = static_cast<bool>(*sectors);
    auto& cmd = suite_cmd ? *sectors : *run;
    auto& opts = suite_cmd ? sector_opts : run_opts;
    return guarded([&] {
      const auto config = assemble(cmd, opts);
      if (!opts.dump_hamiltonian.empty()) {
        ex::validate(config);
        dump_hamiltonian(config, opts.dump_hamiltonian);
        std::cerr << "wrote " << opts.dump_hamiltonian << "\n";
      }
      const bool suite = suite_cmd || (!config.preset.empty() && ex::preset_is_sector_suite(config.preset));
      const int status = suite ? ex::run_sector_suite(config, &std::cerr)
                               : ex::run_experiment(config, &std::cerr);
      std::cerr << "results in " << config.output_dir.string() << "\n";
      return status == 0 ? int{kOk} : int{kRunFailed};
    });
  }
  if (*postselect) {
    return guarded([&] {
      const auto report = ex::post_select_report(in_dir, sigma_th);
      std::printf("selected %zu of %zu states (sigma <= %g)\n", report.selected.size(), report.all.size(),
                  sigma_th);
      std::printf("mean nearest-eigenvalue distance: selected %.6g (se %.2g), all %.6g (se %.2g)\n",
                  report.selected_stats.mean_distance, report.selected_stats.std_error,
                  report.unselected_stats.mean_distance, report.unselected_stats.std_error);
      return int{kOk};
    });
  }
  if (*plot) {
    return guarded([&] {
      for (const auto& path : ex::emit_plots(plot_dir, plot_sigma)) std::cout << path.string() << "\n";
      return int{kOk};
    });
  }
  return kUsage;
}
