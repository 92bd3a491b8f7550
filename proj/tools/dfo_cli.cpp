// dfo: run experiment presets, validate configs, inspect oracles and networks.
//
// Exit status: 0 success, 1 validation failure (bad arguments, bad config,
// failed checks), 2 runtime failure.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfo/error.hpp"
#include "dfo/harness.hpp"
#include "dfo/network.hpp"

namespace {

constexpr int kValidationFailure = 1;
constexpr int kRuntimeFailure = 2;

// Thrown for problems with the user's input, as opposed to failures while running.
struct UsageError {
  std::string message;
};

std::vector<long> parse_tgrid(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long t = std::stol(item, &used);
      if (used != item.size() || t < 1) throw std::invalid_argument(item);
      out.push_back(t);
    } catch (const std::exception&) {
      throw UsageError{"--tgrid: '" + item + "' is not a positive integer"};
    }
  }
  if (out.empty()) throw UsageError{"--tgrid: empty list"};
  return out;
}

dfo::ExperimentConfig resolve(const std::string& preset, const std::string& config_path) {
  if (!config_path.empty()) {
    try {
      return dfo::load_config(config_path);
    } catch (const dfo::Error& e) {
      throw UsageError{e.what()};
    }
  }
  try {
    return dfo::preset_config(preset);
  } catch (const dfo::Error& e) {
    throw UsageError{std::string(e.what()) + " (known presets: fig1-ls, fig2-agents, fig4-cauchy, "
                                             "fig6-dims, msdfmd-demo, custom)"};
  }
}

int cmd_run(const std::string& preset, const std::string& config_path, long long seed,
            const std::string& out, const std::string& tgrid) {
  auto config = resolve(preset, config_path);
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
  if (!tgrid.empty()) config.tgrid = parse_tgrid(tgrid);
  const auto check = dfo::check_config(config);
  for (const auto& w : check.warnings) std::cerr << "warning: " << w << '\n';
  if (!check.ok()) {
    for (const auto& e : check.errors) std::cerr << "error: " << e << '\n';
    return kValidationFailure;
  }
  const std::filesystem::path out_path = out.empty() ? config.preset + ".csv" : out;
  const auto results = dfo::run_preset(config);
  for (const auto& r : results) {
    const auto path = dfo::sweep_output_path(out_path, r.label);
    dfo::emit_csv(r.rows, path, r.metadata);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << path.string() << " (" << r.rows.size() << " rows, J*="
              << r.oracle.value << ")\n";
  }
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const auto config = resolve("", config_path);
  const auto check = dfo::check_config(config);
  std::cout << dfo::to_config_text(config);
  for (const auto& w : check.warnings) std::cout << "# warning: " << w << '\n';
  for (const auto& e : check.errors) std::cout << "# error: " << e << '\n';
  std::cout << "# " << (check.ok() ? "pass" : "fail") << '\n';
  return check.ok() ? 0 : kValidationFailure;
}

int cmd_oracle(const std::string& preset, const std::string& config_path, long long seed) {
  auto config = resolve(preset, config_path);
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
  std::vector<std::pair<std::string, dfo::ExperimentConfig>> points;
  if (config.sweep.empty()) {
    points.emplace_back("", config);
  } else {
    for (int v : config.sweep_values) {
      points.emplace_back(config.sweep + "=" + std::to_string(v), dfo::sweep_point(config, v));
    }
  }
  for (const auto& [label, c] : points) {
    const auto r = dfo::run_oracle(c);
    if (!label.empty()) std::cout << "[" << label << "]\n";
    std::printf("method = %s\nvalue = %.12g\n", r.method.c_str(), r.value);
    if (r.gradient_norm == r.gradient_norm) std::printf("gradient_norm = %.3e\n", r.gradient_norm);
    if (r.pl_modulus) std::printf("pl_modulus = %.12g\n", *r.pl_modulus);
    if (r.restart_values.size() > 1) {
      std::printf("restarts = %zu\nrestart_spread = %.3e\n", r.restart_values.size(),
                  r.restart_spread());
    }
    for (const auto& n : r.notes) std::printf("note = %s\n", n.c_str());
  }
  return 0;
}

int cmd_network_check(int m, long horizon, const std::string& kind, int window,
                      unsigned long long seed) {
  if (m < 2) throw UsageError{"--m must be at least 2"};
  if (horizon < 1) throw UsageError{"--horizon must be at least 1"};
  dfo::ExperimentConfig c;
  c.m = m;
  c.network.kind = kind;
  c.network.window = window;
  c.network.seed = seed;
  dfo::MixingSchedule schedule = [&] {
    try {
      return dfo::build_schedule(c);
    } catch (const dfo::Error& e) {
      throw UsageError{e.what()};
    }
  }();
  if (horizon < schedule.window()) throw UsageError{"--horizon must be at least B"};
  const auto report = dfo::validate_assumption1(schedule, horizon);
  const auto bound = dfo::check_mixing_bound(schedule, horizon);
  const auto params = dfo::mixing_bound_params(m, schedule.zeta(), schedule.window());
  std::printf("schedule = %s m=%d B=%d zeta=%.6g\n", std::string(dfo::to_string(schedule.kind())).c_str(),
              m, schedule.window(), schedule.zeta());
  std::printf("assumption1 = %s (%zu issues)\n", report.passed() ? "pass" : "fail",
              report.issues.size());
  constexpr std::size_t kShown = 10;
  for (std::size_t k = 0; k < report.issues.size() && k < kShown; ++k) {
    const auto& issue = report.issues[k];
    std::printf("  %s t=%ld window=%ld value=%.3e\n", issue.kind.c_str(), issue.t, issue.window,
                issue.value);
  }
  if (report.issues.size() > kShown) std::printf("  ... %zu more\n", report.issues.size() - kShown);
  std::printf("omega = %.9g gamma = %.9g\n", params.omega, params.gamma);
  std::printf("mixing_bound pairs=%ld violations=%ld worst_ratio=%.6g max_stochasticity_error=%.3e\n",
              bound.pairs_checked, bound.violations, bound.worst_ratio,
              bound.max_stochasticity_error);
  return report.passed() && bound.violations == 0 ? 0 : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed functional optimization simulator"};
  app.require_subcommand(1);

  std::string preset = "fig1-ls", config_path, out, tgrid;
  long long seed = -1;
  auto* run = app.add_subcommand("run", "Run a preset (one independent run per T) and write CSV");
  run->add_option("--preset", preset, "fig1-ls | fig2-agents | fig4-cauchy | fig6-dims | msdfmd-demo | custom");
  run->add_option("--config", config_path, "Config file (overrides --preset)");
  run->add_option("--seed", seed, "Data seed (default 42)");
  run->add_option("--out", out, "Output CSV (sweeps add _m30 etc. before the extension)");
  run->add_option("--tgrid", tgrid, "Comma-separated T values");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file and print it resolved");
  validate->add_option("--config", validate_path, "Config file")->required();

  std::string oracle_preset = "fig1-ls", oracle_config;
  long long oracle_seed = -1;
  auto* oracle = app.add_subcommand("oracle", "Print the reference solution of a preset");
  oracle->add_option("--preset", oracle_preset, "Preset name");
  oracle->add_option("--config", oracle_config, "Config file (overrides --preset)");
  oracle->add_option("--seed", oracle_seed, "Data seed (default 42)");

  int m = 0;
  long horizon = 0;
  std::string kind = "ring";
  int window = 2;
  unsigned long long net_seed = 0;
  auto* network = app.add_subcommand("network-check", "Validate a schedule and the mixing bound");
  network->add_option("--m", m, "Agents")->required();
  network->add_option("--horizon", horizon, "Horizon T")->required();
  network->add_option("--kind", kind, "ring | matching-alternation | random-cycle");
  network->add_option("--window", window, "B for time-varying kinds (default 2)");
  network->add_option("--seed", net_seed, "Seed for random-cycle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationFailure;
  }

  try {
    if (*run) return cmd_run(preset, config_path, seed, out, tgrid);
    if (*validate) return cmd_validate(validate_path);
    if (*oracle) return cmd_oracle(oracle_preset, oracle_config, oracle_seed);
    if (*network) return cmd_network_check(m, horizon, kind, window, net_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kRuntimeFailure;
}
