#include "fixpointrl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "fixpointrl/errors.hpp"

namespace fixpointrl::experiments {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as " + expected);
}

double parse_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), x);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) bad_value(key, value, "a number");
  return x;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int x = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), x);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "on/off");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "preset", "model", "qubits", "j-over-h", "k-over-h", "g", "r", "p", "w-th", "w-r",
      "tau-min", "tau-max", "reset", "k-max", "k0", "realizations", "sector", "sigma-th",
      "out", "seed", "plots", "workers"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "preset") c.preset = value;
  else if (key == "model") c.model = models::parse_model_kind(value);
  else if (key == "qubits") c.qubits = parse_int<int>(key, value);
  else if (key == "j-over-h") c.j_over_h = parse_double(key, value);
  else if (key == "k-over-h") c.k_over_h = parse_double(key, value);
  else if (key == "g") c.g_over_de = parse_double(key, value);
  else if (key == "r") c.reward_rate = parse_double(key, value);
  else if (key == "p") {
    if (value == "auto") c.punishment_rate.reset();
    else c.punishment_rate = parse_double(key, value);
  } else if (key == "w-th") c.w_threshold = parse_double(key, value);
  else if (key == "w-r") c.w_reset = parse_double(key, value);
  else if (key == "tau-min") c.tau_min = parse_double(key, value);
  else if (key == "tau-max") c.tau_max = parse_double(key, value);
  else if (key == "reset") c.reset_enabled = parse_bool(key, value);
  else if (key == "k-max") {
    if (value == "auto") c.max_iterations.reset();
    else c.max_iterations = parse_int<std::int64_t>(key, value);
  } else if (key == "k0") {
    if (value == "auto") c.decay_start.reset();
    else c.decay_start = parse_int<std::int64_t>(key, value);
  } else if (key == "realizations") c.realizations = parse_int<int>(key, value);
  else if (key == "sector") {
    if (value == "none") c.sector.reset();
    else c.sector = parse_int<int>(key, value);
  } else if (key == "sigma-th") {
    if (value == "none") c.sigma_th.reset();
    else c.sigma_th = parse_double(key, value);
  } else if (key == "out") c.output_dir = value;
  else if (key == "seed") c.master_seed = parse_int<std::uint64_t>(key, value);
  else if (key == "plots") c.emit_plots = parse_bool(key, value);
  else if (key == "workers") c.workers = parse_int<int>(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  auto opt_d = [](const std::optional<double>& x, const char* none) {
    return x ? fmt(*x) : std::string(none);
  };
  auto opt_i = [](const auto& x, const char* none) {
    return x ? std::to_string(*x) : std::string(none);
  };
  return {
      {"preset", c.preset},
      {"model", models::to_string(c.model)},
      {"qubits", std::to_string(c.qubits)},
      {"j-over-h", fmt(c.j_over_h)},
      {"k-over-h", fmt(c.k_over_h)},
      {"g", fmt(c.g_over_de)},
      {"r", fmt(c.reward_rate)},
      {"p", opt_d(c.punishment_rate, "auto")},
      {"w-th", fmt(c.w_threshold)},
      {"w-r", fmt(c.w_reset)},
      {"tau-min", fmt(c.tau_min)},
      {"tau-max", fmt(c.tau_max)},
      {"reset", c.reset_enabled ? "on" : "off"},
      {"k-max", opt_i(c.max_iterations, "auto")},
      {"k0", opt_i(c.decay_start, "auto")},
      {"realizations", std::to_string(c.realizations)},
      {"sector", opt_i(c.sector, "none")},
      {"sigma-th", opt_d(c.sigma_th, "none")},
      {"out", c.output_dir.string()},
      {"seed", std::to_string(c.master_seed)},
      {"plots", c.emit_plots ? "on" : "off"},
      {"workers", std::to_string(c.workers)},
  };
}

std::string to_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "# fixpointrl experiment configuration\n";
  for (const auto& [key, value] : config_entries(config)) out << key << " = " << value << "\n";
  return out.str();
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6-n2", "fig6-n3", "fig6-n4", "fig6-n5",
          "fig7-n5", "fig7-n6"};
}

ExperimentConfig preset(const std::string& requested) {
  std::string name = requested;
  if (name.rfind("fig6-pairing-", 0) == 0) name = "fig6-" + name.substr(13);
  ExperimentConfig c;
  c.preset = name;
  c.reward_rate = 0.9;
  c.w_threshold = 0.005;
  c.reset_enabled = true;
  c.tau_min = 0.0;
  if (name == "fig2" || name == "fig3") {
    c.model = models::ModelKind::kRandom;
    c.qubits = name == "fig2" ? 2 : 3;
    c.w_reset = 0.01;
    c.tau_max = 100.0;
    c.realizations = 100;
  } else if (name == "fig4" || name == "fig5") {
    c.model = models::ModelKind::kTfim;
    c.qubits = 4;
    c.j_over_h = 1.0;
    c.k_over_h = 0.5;
    c.w_reset = 0.05;
    c.tau_max = 600.0;
    c.realizations = 50;
    if (name == "fig5") c.reward_rate = 0.93;
  } else if (name.rfind("fig6-n", 0) == 0 || name.rfind("fig7-n", 0) == 0) {
    const bool sectors = name[3] == '7';
    const std::string n = name.substr(6);
    const std::vector<std::string> allowed =
        sectors ? std::vector<std::string>{"5", "6"} : std::vector<std::string>{"2", "3", "4", "5"};
    if (std::find(allowed.begin(), allowed.end(), n) == allowed.end()) {
      throw ConfigError("unknown preset '" + name + "'");
    }
    c.model = models::ModelKind::kPairing;
    c.qubits = std::stoi(n);
    c.g_over_de = 1.0;
    c.w_reset = 0.05;
    c.tau_max = 600.0;
    c.realizations = sectors ? 20 : 50;
  } else {
    std::string known;
    for (const auto& p : preset_names()) known += " " + p;
    throw ConfigError("unknown preset '" + name + "' (known:" + known + ")");
  }
  c.output_dir = "results/" + name;
  return c;
}

bool preset_is_sector_suite(const std::string& name) { return name.rfind("fig7-", 0) == 0; }

std::int64_t default_iteration_budget(models::ModelKind model, int qubits, bool sector_restricted) {
  switch (model) {
    case models::ModelKind::kRandom:
      return qubits <= 2 ? 2000 : 6000;
    case models::ModelKind::kTfim:
      return qubits <= 2 ? 4000 : qubits == 3 ? 8000 : 20000;
    case models::ModelKind::kPairing:
      (void)sector_restricted;
      return 20000;
  }
  return 20000;
}

agent::AgentConfig resolve_agent_config(const ExperimentConfig& c) {
  agent::AgentConfig a;
  a.reward_rate = c.reward_rate;
  a.punishment_rate = c.punishment_rate.value_or(2.0 / c.reward_rate);
  a.w_threshold = c.w_threshold;
  a.reset_enabled = c.reset_enabled;
  a.w_reset = c.w_reset;
  a.max_iterations = c.max_iterations.value_or(
      default_iteration_budget(c.model, c.qubits, c.sector.has_value()));
  a.decay_start = c.decay_start.value_or(a.max_iterations * 6 / 10);
  a.tau_min = c.tau_min;
  a.tau_max = c.tau_max;
  return a;
}

void validate(const ExperimentConfig& c) {
  std::vector<std::string> violations;
  if (c.realizations < 1) violations.push_back("realizations >= 1");
  if (c.qubits < 2 || c.qubits > 6) violations.push_back("qubits in [2, 6]");
  if (c.sector) {
    if (c.model != models::ModelKind::kPairing) violations.push_back("sector runs need model = pairing");
    if (*c.sector < 0 || *c.sector > c.qubits) violations.push_back("0 <= sector <= qubits");
  }
  if (c.sigma_th && !(*c.sigma_th > 0.0)) violations.push_back("sigma-th > 0");
  if (c.workers < 0) violations.push_back("workers >= 0");
  if (!violations.empty()) {
    std::string msg = "invalid experiment configuration, violated:";
    for (const auto& v : violations) msg += " [" + v + "]";
    throw ConfigError(msg);
  }
  agent::validate(resolve_agent_config(c));
}

}  // namespace fixpointrl::experiments
