#include "dfo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dfo/dfgd.hpp"
#include "dfo/error.hpp"

namespace dfo {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool uses_kernel(const ExperimentConfig& c) { return c.engine != EngineKind::kMsDfmd; }

KernelProblem make_problem(const ExperimentConfig& c) {
  auto data = generate(c.m, c.n, c.d, c.seed);
  if (c.outliers) data = inject_outliers(std::move(data), c.outlier_shift, c.outlier_pattern);
  return build_problem(data, c.bandwidth, c.loss, c.lambda, c.resolved_scale());
}

OracleReport kernel_oracle(const ExperimentConfig& c, const GlobalRisk& global) {
  OracleKind kind = c.oracle;
  if (kind == OracleKind::kAuto) {
    kind = global.locals().front().loss().quadratic() ? OracleKind::kLeastSquares
                                                      : OracleKind::kGradientDescent;
  }
  if (kind == OracleKind::kLeastSquares) return solve_ls_pooled(global);
  if (kind == OracleKind::kGradientDescent) {
    GdOracleOptions opt;
    opt.iterations = c.oracle_iterations;
    opt.restarts = c.restarts;
    opt.seed = c.seed;
    return solve_centralized_gd(global, opt);
  }
  throw Error("bad-config", "brute-force oracle needs the ms-dfmd engine");
}

std::vector<std::string> describe(const ExperimentConfig& c, const OracleReport& oracle) {
  std::vector<std::string> meta;
  meta.push_back("preset=" + c.preset + " seed=" + std::to_string(c.seed) +
                 " engine=" + std::string(to_string(c.engine)));
  meta.push_back("runs=independent per T, errors at the ergodic average of each agent");
  meta.push_back("step=" + std::string(to_string(c.rule)) +
                 (c.rule == StepRule::kConstant ? " eta=" + fmt(c.eta) : ""));
  meta.push_back("network=" + c.network.kind + " window=" + std::to_string(c.network.window));
  if (uses_kernel(c)) {
    meta.push_back("data m=" + std::to_string(c.m) + " n=" + std::to_string(c.n) +
                   " d=" + std::to_string(c.d) + " inputs=uniform[-1,1] noise=box-muller-cos");
    meta.push_back("kernel=gaussian bandwidth=" + fmt(c.bandwidth));
    meta.push_back("loss=" + std::string(to_string(c.loss.kind)) +
                   (c.loss.quadratic() ? "" : " sigma=" + fmt(c.loss.sigma)) +
                   " lambda=" + fmt(c.lambda) + " scale=" + fmt(c.resolved_scale()) +
                   (c.scale ? "" : " (1/m)"));
    if (c.outliers) {
      meta.push_back("outliers: y_i1 += " + fmt(c.outlier_shift) + ", y_i2 -= " +
                     fmt(c.outlier_shift) + " for " +
                     (c.outlier_pattern == OutlierPattern::kEveryAgent ? "every agent"
                                                                       : "every second agent"));
    } else {
      meta.push_back("outliers: none");
    }
    if (c.engine == EngineKind::kDfmd) {
      meta.push_back("mirror map=quadratic domain=" +
                     (c.radius > 0.0 ? "rkhs-ball R=" + fmt(c.radius) : std::string("whole-space")));
    }
  } else {
    meta.push_back("simplex m=" + std::to_string(c.m) + " n=" + std::to_string(c.n) +
                   " mirror map=negative-entropy");
  }
  std::string notes;
  for (const auto& s : oracle.notes) notes += " " + s;
  meta.push_back("oracle=" + oracle.method + " J*=" + fmt(oracle.value) +
                 (std::isnan(oracle.gradient_norm) ? "" : " gradnorm=" + fmt(oracle.gradient_norm)) +
                 (oracle.restart_values.size() > 1 ? " restart_spread=" + fmt(oracle.restart_spread())
                                                   : "") +
                 notes);
  return meta;
}

double smoothness_for(const ExperimentConfig& c, const std::vector<LocalRisk>& risks) {
  return c.smoothness.value_or(max_smoothness(risks));
}

double modulus_for(const ExperimentConfig& c) {
  return c.pl_modulus.value_or(c.lambda * c.resolved_scale());
}

RunConfig run_config(const ExperimentConfig& c, long T, double smoothness) {
  RunConfig rc;
  rc.iterations = T;
  rc.rule = c.rule;
  rc.eta = c.eta;
  rc.smoothness = smoothness;
  rc.pl_modulus = modulus_for(c);
  rc.record_stride = std::max<long>(T - 1, 1);  // records t = 1 and t = T
  return rc;
}

void check_error(const ExperimentConfig& c, bool convex, long T, double err,
                 std::vector<std::string>& warnings) {
  if (err >= -1e-9) return;
  const std::string msg = "negative optimization error " + fmt(err) + " at T=" + std::to_string(T);
  if (convex) throw Error("negative-error", msg + " for preset " + c.preset);
  warnings.push_back(msg + " (nonconvex reference)");
}

SweepResult run_kernel(const ExperimentConfig& c) {
  const auto problem = make_problem(c);
  const GlobalRisk global(problem.risks);
  const auto schedule = build_schedule(c);
  const double lhat = smoothness_for(c, problem.risks);

  SweepResult out;
  out.oracle = kernel_oracle(c, global);
  out.metadata = describe(c, out.oracle);
  const Matrix& g = problem.centers->gram();
  if (c.engine == EngineKind::kDfmd && c.radius > 0.0) {
    const double norm = std::sqrt(std::max(0.0, out.oracle.solution.dot(g * out.oracle.solution)));
    if (norm > c.radius) out.metadata.push_back("reference lies outside the ball (|f*|=" + fmt(norm) + ")");
  }
  const auto initial = zero_states(problem.centers, problem.risks.size());
  const auto geometry = quadratic_geometry(problem.centers);
  const auto domain =
      c.radius > 0.0 ? DecisionDomain::rkhs_ball(c.radius) : DecisionDomain::whole_space();

  for (long T : c.tgrid) {
    const RunConfig rc = run_config(c, T, lhat);
    const RunTrajectory traj =
        c.engine == EngineKind::kDfgd
            ? run_dfgd(rc, schedule, problem.risks, initial)
            : run_dfmd(rc, schedule, problem.risks, initial, *geometry, domain);
    MetricsRow row;
    row.T = T;
    row.max_err = -std::numeric_limits<double>::infinity();
    row.min_err = std::numeric_limits<double>::infinity();
    for (const auto& avg : traj.ergodic) {
      const Vector u = g * avg;
      const double err = global.value_from_values(avg, u) - out.oracle.value;
      check_error(c, global.convex(), T, err, out.warnings);
      row.max_err = std::max(row.max_err, err);
      row.min_err = std::min(row.min_err, err);
      const Vector grad = global.gradient_from_values(avg, u);
      row.max_gradnorm = std::max(row.max_gradnorm, std::sqrt(std::max(0.0, grad.dot(g * grad))));
    }
    row.mean_consensus = traj.consensus.back().mean();
    row.empirical_g = traj.empirical_g();
    const auto bound = check_consensus_bound(traj, schedule);
    if (bound.violations > 0) {
      out.warnings.push_back("consensus bound violated at " + std::to_string(bound.violations) +
                             " iterates for T=" + std::to_string(T));
    }
    for (const auto& w : traj.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) {
        out.warnings.push_back(w);
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

SweepResult run_simplex(const ExperimentConfig& c) {
  const auto functionals = simplex_functionals(c.m, c.n, c.seed);
  const auto schedule = build_schedule(c);
  SweepResult out;
  out.oracle = brute_force_simplex(functionals, c.simplex_resolution);
  out.metadata = describe(c, out.oracle);
  const std::vector<ProbabilityVector> initial(static_cast<std::size_t>(c.m),
                                               ProbabilityVector::uniform(c.n));
  for (long T : c.tgrid) {
    RunConfig rc = run_config(c, T, c.smoothness.value_or(0.0));
    const RunTrajectory traj = run_ms_dfmd(rc, schedule, functionals, initial);
    MetricsRow row;
    row.T = T;
    row.max_err = -std::numeric_limits<double>::infinity();
    row.min_err = std::numeric_limits<double>::infinity();
    for (const auto& avg : traj.ergodic) {
      const double err = simplex_objective(functionals, avg) - out.oracle.value;
      check_error(c, true, T, err, out.warnings);
      row.max_err = std::max(row.max_err, err);
      row.min_err = std::min(row.min_err, err);
      Vector grad = Vector::Zero(c.n);
      for (const auto& f : functionals) grad += f.gradient(avg);
      row.max_gradnorm = std::max(row.max_gradnorm, grad.lpNorm<Eigen::Infinity>());
    }
    row.mean_consensus = traj.consensus.back().mean();
    row.empirical_g = traj.empirical_g();
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

MixingSchedule build_schedule(const ExperimentConfig& c) {
  const auto& net = c.network;
  MixingSchedule base = [&] {
    if (net.kind == "ring") return ring_schedule(c.m);
    if (net.kind == "matching-alternation") return matching_alternation(c.m, net.window);
    if (net.kind == "random-cycle") return random_edge_cycle(c.m, net.window, net.seed);
    if (net.kind == "file") {
      auto s = load_schedule(net.file);
      if (s.agents() != c.m) throw Error("dim-mismatch", "schedule file has a different agent count");
      return s;
    }
    throw Error("bad-config", "unknown network kind " + net.kind);
  }();
  if (!net.zeta) return base;
  return MixingSchedule(base.kind(), base.agents(), base.window(), *net.zeta, base.cycle(),
                        base.seed());
}

std::vector<SimplexFunctional> demo_simplex_functionals() {
  const double c[4][3] = {{1, 3, 2}, {3, 1, 2}, {2, 3, 0.5}, {1, 2, 3}};
  const double a[4][3] = {{0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.1, 0.2, 0.7}, {0.3, 0.4, 0.3}};
  std::vector<SimplexFunctional> out;
  for (int i = 0; i < 4; ++i) {
    out.push_back({Vector::Map(c[i], 3), 2.0, Vector::Map(a[i], 3)});
  }
  return out;
}

std::vector<SimplexFunctional> simplex_functionals(int m, int n, std::uint64_t seed) {
  if (m == 4 && n == 3) return demo_simplex_functionals();
  if (m < 1 || n < 2) throw Error("bad-size", "need m >= 1 and n >= 2");
  Rng rng(seed);
  std::vector<SimplexFunctional> out;
  for (int i = 0; i < m; ++i) {
    SimplexFunctional f;
    f.linear.resize(n);
    f.anchor.resize(n);
    for (int j = 0; j < n; ++j) f.linear[j] = rng.uniform(0.0, 3.0);
    for (int j = 0; j < n; ++j) f.anchor[j] = rng.uniform(0.05, 1.0);
    f.anchor /= f.anchor.sum();
    f.curvature = 2.0;
    out.push_back(std::move(f));
  }
  return out;
}

std::string format_csv(const std::vector<MetricsRow>& rows, const std::vector<std::string>& metadata) {
  std::ostringstream o;
  for (const auto& line : metadata) o << "# " << line << '\n';
  o << "T,max_err,min_err,mean_consensus,max_gradnorm,empirical_G\n";
  for (const auto& r : rows) {
    o << r.T << ',' << fmt(r.max_err) << ',' << fmt(r.min_err) << ',' << fmt(r.mean_consensus)
      << ',' << fmt(r.max_gradnorm) << ',' << fmt(r.empirical_g) << '\n';
  }
  return o.str();
}

void emit_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path,
              const std::vector<std::string>& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot write " + path.string());
  out << format_csv(rows, metadata);
  if (!out) throw Error("io-error", "write failed for " + path.string());
}

OracleReport run_oracle(const ExperimentConfig& c) {
  if (!uses_kernel(c)) return brute_force_simplex(simplex_functionals(c.m, c.n, c.seed), c.simplex_resolution);
  const auto problem = make_problem(c);
  return kernel_oracle(c, GlobalRisk(problem.risks));
}

std::vector<SweepResult> run_preset(const ExperimentConfig& config) {
  std::vector<SweepResult> out;
  auto run_one = [&](const ExperimentConfig& c) {
    if (c.engine == EngineKind::kDfmd && !c.loss.convex()) {
      throw Error("nonconvex-loss", "the dfmd engine requires a convex loss");
    }
    return uses_kernel(c) ? run_kernel(c) : run_simplex(c);
  };
  if (config.sweep.empty()) {
    out.push_back(run_one(config));
    return out;
  }
  for (int v : config.sweep_values) {
    SweepResult r = run_one(sweep_point(config, v));
    r.label = config.sweep + std::to_string(v);
    r.metadata.insert(r.metadata.begin() + 1, "sweep " + config.sweep + "=" + std::to_string(v));
    out.push_back(std::move(r));
  }
  return out;
}

std::filesystem::path sweep_output_path(const std::filesystem::path& out, const std::string& label) {
  if (label.empty()) return out;
  auto p = out;
  p.replace_filename(out.stem().string() + "_" + label + out.extension().string());
  return p;
}

ConfigCheck check_config(const ExperimentConfig& config) {
  ConfigCheck check;
  if (config.tgrid.empty()) check.errors.push_back("tgrid: empty");
  if (!config.sweep.empty() && config.sweep_values.empty()) {
    check.errors.push_back("sweep_values: empty for sweep " + config.sweep);
  }
  if (config.engine == EngineKind::kDfmd && !config.loss.convex()) {
    check.errors.push_back("nonconvex-loss: the dfmd engine requires a convex loss");
  }
  if (config.outliers && config.n < 2) check.errors.push_back("too-few-samples-for-outliers");
  if (config.rule == StepRule::kConstant && !(config.eta > 0.0)) {
    check.errors.push_back("step.eta: constant rule needs eta > 0");
  }
  if (!check.ok()) return check;

  std::vector<ExperimentConfig> points;
  if (config.sweep.empty()) {
    points.push_back(config);
  } else {
    for (int v : config.sweep_values) points.push_back(sweep_point(config, v));
  }
  const long horizon = *std::max_element(config.tgrid.begin(), config.tgrid.end());
  for (const auto& c : points) {
    const std::string where = config.sweep.empty() ? "" : " (" + config.sweep + "=" +
        std::to_string(config.sweep == "m" ? c.m : c.d) + ")";
    try {
      const auto schedule = build_schedule(c);
      const auto report = validate_assumption1(schedule, std::max<long>(horizon, schedule.window()));
      for (const auto& issue : report.issues) {
        check.errors.push_back(issue.kind + " at t=" + std::to_string(issue.t) +
                               (issue.window >= 0 ? " window=" + std::to_string(issue.window) : "") +
                               " value=" + fmt(issue.value) + where);
      }
      if (c.rule == StepRule::kConstant && uses_kernel(c)) {
        const auto problem = make_problem(c);
        const double lhat = smoothness_for(c, problem.risks);
        for (const auto& w : step_range_warnings(c.eta, modulus_for(c), lhat, c.m)) {
          check.warnings.push_back(w + where);
        }
      }
      if (c.rule == StepRule::kSmoothRate && !uses_kernel(c) && !c.smoothness) {
        check.errors.push_back("step.L: smooth-rate rule needs L for ms-dfmd" + where);
      }
    } catch (const Error& e) {
      check.errors.push_back(std::string(e.what()) + where);
    }
  }
  return check;
}

}  // namespace dfo
