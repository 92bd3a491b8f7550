#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dfo/datagen.hpp"
#include "dfo/dfmd.hpp"
#include "dfo/network.hpp"
#include "dfo/oracle.hpp"
#include "dfo/run.hpp"

namespace dfo {

enum class EngineKind { kDfgd, kDfmd, kMsDfmd };
enum class OracleKind { kAuto, kLeastSquares, kGradientDescent, kBruteForce };

std::string_view to_string(EngineKind kind);
std::string_view to_string(OracleKind kind);

struct NetworkConfig {
  std::string kind = "ring";  // ring | matching-alternation | random-cycle | file
  int window = 1;             // B, for the generated time-varying kinds
  std::optional<double> zeta;  // overrides the generator's certified floor
  std::string file;
  std::uint64_t seed = 0;
};

/// Every parameter of one experiment, resolved to concrete values.
/// The documented file format is in docs/config.md.
struct ExperimentConfig {
  std::string preset = "custom";
  std::uint64_t seed = 42;
  std::vector<long> tgrid{100, 250, 500, 1000, 2000, 4000};

  int m = 30;
  int n = 10;  // samples per agent; simplex grid size for ms-dfmd
  int d = 10;
  double bandwidth = 0.33;
  bool outliers = false;
  double outlier_shift = 5.0;
  OutlierPattern outlier_pattern = OutlierPattern::kEveryAgent;

  LossSpec loss;
  double lambda = 0.0;
  std::optional<double> scale;  // default 1/m

  StepRule rule = StepRule::kInverseSqrtT;
  double eta = 0.0;
  std::optional<double> smoothness;  // default max_i L_i
  std::optional<double> pl_modulus;  // default lambda * scale

  NetworkConfig network;

  EngineKind engine = EngineKind::kDfgd;
  double radius = 0.0;  // dfmd: RKHS ball radius, 0 for the whole space

  OracleKind oracle = OracleKind::kAuto;
  int restarts = 5;
  long oracle_iterations = 200000;
  int simplex_resolution = 2000;

  std::string sweep;  // "", "m" or "d"
  std::vector<int> sweep_values;

  double resolved_scale() const { return scale.value_or(1.0 / m); }
};

std::vector<std::string> preset_names();
/// Throws "unknown-preset".
ExperimentConfig preset_config(std::string_view name);

/// key = value lines grouped by [section]; '#' and ';' start comments.
/// Parse errors throw "parse-error" naming the line and field.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);
/// Config text that parse_config maps back to `config`.
std::string to_config_text(const ExperimentConfig& config);

/// Copy of `config` with the sweep parameter set to `value`.
ExperimentConfig sweep_point(const ExperimentConfig& config, int value);

MixingSchedule build_schedule(const ExperimentConfig& config);

/// The fixed heterogeneous problem of the msdfmd-demo preset (m = 4, n = 3):
/// J_i(p) = <c_i, p> + |p - a_i|^2.
std::vector<SimplexFunctional> demo_simplex_functionals();
/// demo_simplex_functionals for (4, 3); otherwise seeded random functionals
/// of the same form.
std::vector<SimplexFunctional> simplex_functionals(int m, int n, std::uint64_t seed);

struct MetricsRow {
  long T = 0;
  double max_err = 0.0;
  double min_err = 0.0;
  double mean_consensus = 0.0;
  double max_gradnorm = 0.0;
  double empirical_g = 0.0;
};

/// Header "T,max_err,min_err,mean_consensus,max_gradnorm,empirical_G" and one
/// row per entry with 12 significant digits. Each metadata string becomes a
/// "# " comment line ahead of the header. Throws "io-error".
void emit_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path,
              const std::vector<std::string>& metadata = {});
std::string format_csv(const std::vector<MetricsRow>& rows,
                       const std::vector<std::string>& metadata = {});

struct SweepResult {
  std::string label;  // "" or e.g. "m30"
  OracleReport oracle;
  std::vector<MetricsRow> rows;
  std::vector<std::string> metadata;
  std::vector<std::string> warnings;
};

/// Reference solution for the (single-point) configuration.
OracleReport run_oracle(const ExperimentConfig& config);

/// One independent run per T in config.tgrid (per sweep value). Errors are
/// J(f~_{l,T}) - J(f*) over agents l; a convex run with an error below
/// -1e-9 throws "negative-error".
std::vector<SweepResult> run_preset(const ExperimentConfig& config);

/// out.csv -> out_m30.csv for the sweep label "m30".
std::filesystem::path sweep_output_path(const std::filesystem::path& out, const std::string& label);

struct ConfigCheck {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Assumption 1 over max(tgrid), step-size sanity and engine/loss
/// compatibility. Constant steps outside the theorem range only warn.
ConfigCheck check_config(const ExperimentConfig& config);

}  // namespace dfo
