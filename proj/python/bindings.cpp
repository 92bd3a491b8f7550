#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "dfo/datagen.hpp"
#include "dfo/error.hpp"
#include "dfo/harness.hpp"
#include "dfo/kernel.hpp"
#include "dfo/loss.hpp"
#include "dfo/network.hpp"

namespace py = pybind11;

namespace {

dfo::ExperimentConfig resolve(const std::optional<std::string>& preset,
                              const std::optional<std::string>& config_text) {
  if (config_text) return dfo::parse_config(*config_text);
  return dfo::preset_config(preset.value_or("fig1-ls"));
}

py::dict row_dict(const dfo::MetricsRow& r) {
  py::dict d;
  d["T"] = r.T;
  d["max_err"] = r.max_err;
  d["min_err"] = r.min_err;
  d["mean_consensus"] = r.mean_consensus;
  d["max_gradnorm"] = r.max_gradnorm;
  d["empirical_G"] = r.empirical_g;
  return d;
}

dfo::MetricsRow row_from(const py::dict& d) {
  dfo::MetricsRow r;
  r.T = d["T"].cast<long>();
  r.max_err = d["max_err"].cast<double>();
  r.min_err = d["min_err"].cast<double>();
  r.mean_consensus = d["mean_consensus"].cast<double>();
  r.max_gradnorm = d["max_gradnorm"].cast<double>();
  r.empirical_g = d["empirical_G"].cast<double>();
  return r;
}

py::dict oracle_dict(const dfo::OracleReport& r) {
  py::dict d;
  d["method"] = r.method;
  d["value"] = r.value;
  d["solution"] = r.solution;
  d["gradient_norm"] = r.gradient_norm;
  d["pl_modulus"] = r.pl_modulus;
  d["restart_values"] = r.restart_values;
  d["notes"] = r.notes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dfo, m) {
  m.doc() = "Distributed functional optimization simulator";

  static py::exception<dfo::Error> error(m, "DfoError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const dfo::Error& e) {
      error(e.what());
    }
  });

  m.def("preset_names", &dfo::preset_names);
  m.def(
      "preset_text", [](const std::string& name) { return dfo::to_config_text(dfo::preset_config(name)); },
      py::arg("name"), "Config text of a preset.");

  m.def(
      "validate",
      [](const std::string& config_text) {
        const auto check = dfo::check_config(dfo::parse_config(config_text));
        py::dict d;
        d["ok"] = check.ok();
        d["errors"] = check.errors;
        d["warnings"] = check.warnings;
        return d;
      },
      py::arg("config_text"));

  m.def(
      "run",
      [](std::optional<std::string> preset, std::optional<std::string> config_text,
         std::optional<std::uint64_t> seed, std::optional<std::vector<long>> tgrid) {
        auto c = resolve(preset, config_text);
        if (seed) c.seed = *seed;
        if (tgrid) c.tgrid = *tgrid;
        std::vector<dfo::SweepResult> results;
        {
          py::gil_scoped_release release;
          results = dfo::run_preset(c);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["label"] = r.label;
          d["oracle"] = oracle_dict(r.oracle);
          py::list rows;
          for (const auto& row : r.rows) rows.append(row_dict(row));
          d["rows"] = rows;
          d["metadata"] = r.metadata;
          d["warnings"] = r.warnings;
          d["csv"] = dfo::format_csv(r.rows, r.metadata);
          out.append(d);
        }
        return out;
      },
      py::arg("preset") = py::none(), py::arg("config_text") = py::none(), py::arg("seed") = py::none(),
      py::arg("tgrid") = py::none(), "One independent run per T; returns one dict per sweep point.");

  m.def(
      "oracle",
      [](std::optional<std::string> preset, std::optional<std::string> config_text) {
        return oracle_dict(dfo::run_oracle(resolve(preset, config_text)));
      },
      py::arg("preset") = py::none(), py::arg("config_text") = py::none());

  m.def(
      "format_csv",
      [](const std::vector<py::dict>& rows, const std::vector<std::string>& metadata) {
        std::vector<dfo::MetricsRow> rs;
        for (const auto& d : rows) rs.push_back(row_from(d));
        return dfo::format_csv(rs, metadata);
      },
      py::arg("rows"), py::arg("metadata") = std::vector<std::string>{});

  m.def(
      "network_check",
      [](int agents, long horizon, const std::string& kind, int window, std::uint64_t seed) {
        dfo::ExperimentConfig c;
        c.m = agents;
        c.network.kind = kind;
        c.network.window = window;
        c.network.seed = seed;
        const auto schedule = dfo::build_schedule(c);
        const auto report = dfo::validate_assumption1(schedule, horizon);
        const auto bound = dfo::check_mixing_bound(schedule, horizon);
        py::dict d;
        d["passed"] = report.passed() && bound.violations == 0;
        py::list issues;
        for (const auto& i : report.issues) issues.append(py::make_tuple(i.kind, i.t, i.value));
        d["issues"] = issues;
        d["zeta"] = schedule.zeta();
        d["window"] = schedule.window();
        d["pairs_checked"] = bound.pairs_checked;
        d["violations"] = bound.violations;
        d["worst_ratio"] = bound.worst_ratio;
        d["max_stochasticity_error"] = bound.max_stochasticity_error;
        return d;
      },
      py::arg("m"), py::arg("horizon"), py::arg("kind") = "ring", py::arg("window") = 2,
      py::arg("seed") = 0);

  m.def("mixing_bound", &dfo::mixing_bound, py::arg("m"), py::arg("zeta"), py::arg("window"), py::arg("k"));

  m.def(
      "generate",
      [](int agents, int n, int d, std::uint64_t seed, double outlier_shift) {
        auto data = dfo::generate(agents, n, d, seed);
        if (outlier_shift != 0.0) data = dfo::inject_outliers(std::move(data), outlier_shift);
        py::list out;
        for (const auto& a : data.agents) out.append(py::make_tuple(dfo::Matrix(a.inputs), a.outputs));
        return out;
      },
      py::arg("m"), py::arg("n"), py::arg("d"), py::arg("seed") = 42, py::arg("outlier_shift") = 0.0,
      "Per-agent (X, y) arrays.");

  m.def(
      "gram_matrix",
      [](const dfo::Matrix& points, double bandwidth) {
        return dfo::gram_matrix(dfo::GaussianKernel(bandwidth), dfo::RowMatrix(points));
      },
      py::arg("points"), py::arg("bandwidth") = 0.33);

  m.def(
      "loss",
      [](const std::string& kind, double u, double sigma) {
        const dfo::LossSpec spec(dfo::parse_loss_kind(kind), sigma);
        return py::make_tuple(dfo::loss_value(spec, u), dfo::loss_derivative(spec, u));
      },
      py::arg("kind"), py::arg("u"), py::arg("sigma") = 1.0, "(value, derivative) of a loss at residual u.");
}
