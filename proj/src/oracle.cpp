#include "dfo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "dfo/datagen.hpp"
#include "dfo/error.hpp"

namespace dfo {

namespace {

double rkhs_norm(const Matrix& g, const Vector& c) { return std::sqrt(std::max(0.0, c.dot(g * c))); }

std::optional<double> pl_modulus_of(const GlobalRisk& global) {
  double mu = std::numeric_limits<double>::infinity();
  for (const auto& r : global.locals()) mu = std::min(mu, r.scale() * r.lambda());
  if (mu > 0.0) return mu;
  return std::nullopt;
}

struct SampleWeights {
  std::vector<Eigen::Index> index;  // center index per sample
  Vector weight;                    // scale_i / n_i
  Vector target;
};

SampleWeights pooled_samples(const GlobalRisk& global) {
  SampleWeights out;
  Eigen::Index total = 0;
  for (const auto& r : global.locals()) total += r.data().size();
  out.weight.resize(total);
  out.target.resize(total);
  Eigen::Index k = 0;
  for (const auto& r : global.locals()) {
    const double w = r.scale() / static_cast<double>(r.data().size());
    for (Eigen::Index s = 0; s < r.data().size(); ++s, ++k) {
      out.index.push_back(r.indices()[static_cast<std::size_t>(s)]);
      out.weight[k] = w;
      out.target[k] = r.data().outputs[s];
    }
  }
  return out;
}

}  // namespace

double OracleReport::restart_spread() const {
  if (restart_values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(restart_values.begin(), restart_values.end());
  return *hi - *lo;
}

OracleReport solve_ls_pooled(const GlobalRisk& global) {
  const LossKind kind = global.locals().front().loss().kind;
  for (const auto& r : global.locals()) {
    if (!r.loss().quadratic() || r.loss().kind != kind) {
      throw Error("not-least-squares", "pooled solve needs one quadratic loss kind");
    }
  }
  // Stationarity of sum_s w_s q (G_s c - y_s) + (lam/2) c'Gc with q = u^2/2
  // (kappa = 1) or u^2 (kappa = 2) is G (kappa S'WS G c + lam c - kappa S'W y) = 0.
  const double kappa = kind == LossKind::kSquared ? 2.0 : 1.0;
  const Matrix& g = global.centers()->gram();
  const auto n = g.rows();
  const auto samples = pooled_samples(global);
  const double lam = global.regularization();

  OracleReport report;
  if (lam > 0.0) {
    Matrix a = lam * Matrix::Identity(n, n);
    Vector b = Vector::Zero(n);
    for (std::size_t s = 0; s < samples.index.size(); ++s) {
      const auto j = samples.index[s];
      const double w = kappa * samples.weight[static_cast<Eigen::Index>(s)];
      a.row(j) += w * g.row(j);
      b[j] += w * samples.target[static_cast<Eigen::Index>(s)];
    }
    report.solution = a.partialPivLu().solve(b);
    report.method = "ls-normal-equations";
  } else {
    // Weighted least squares over the sample rows of G, minimum-norm solution.
    const auto rows = static_cast<Eigen::Index>(samples.index.size());
    Matrix a(rows, n);
    Vector b(rows);
    for (Eigen::Index s = 0; s < rows; ++s) {
      const double r = std::sqrt(samples.weight[s]);
      a.row(s) = r * g.row(samples.index[static_cast<std::size_t>(s)]);
      b[s] = r * samples.target[s];
    }
    report.solution = a.completeOrthogonalDecomposition().solve(b);
    report.method = "ls-minimum-norm";
  }
  report.value = global.value(report.solution);
  report.gradient_norm = rkhs_norm(g, global.gradient(report.solution));
  report.pl_modulus = pl_modulus_of(global);
  return report;
}

double global_smoothness(const GlobalRisk& global) {
  const auto samples = pooled_samples(global);
  const auto rows = static_cast<Eigen::Index>(samples.index.size());
  const Matrix& g = global.centers()->gram();
  Matrix w(rows, rows);
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < rows; ++b) {
      w(a, b) = std::sqrt(samples.weight[a] * samples.weight[b]) *
                g(samples.index[static_cast<std::size_t>(a)], samples.index[static_cast<std::size_t>(b)]);
    }
  }
  const double top =
      Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  double curvature = 0.0;
  for (const auto& r : global.locals()) {
    const auto bound = smoothness_bounds(r.loss()).second_derivative;
    if (!bound) return std::numeric_limits<double>::infinity();
    curvature = std::max(curvature, *bound);
  }
  return curvature * top + global.regularization();
}

OracleReport solve_centralized_gd(const GlobalRisk& global, const GdOracleOptions& options) {
  if (options.iterations < 1) throw Error("bad-iterations", "need at least one iteration");
  const Matrix& g = global.centers()->gram();
  const auto n = g.rows();
  const double eta = options.eta > 0.0 ? options.eta : 1.0 / global_smoothness(global);
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error("bad-step", "no finite smoothness bound");

  OracleReport best;
  best.value = std::numeric_limits<double>::infinity();
  Rng rng(options.seed);
  bool tail_flag = false;
  bool converged_all = true;
  for (int start = 0; start <= options.restarts; ++start) {
    Vector c = Vector::Zero(n);
    if (start > 0) {
      for (Eigen::Index j = 0; j < n; ++j) c[j] = rng.normal();
    }
    const long tail_mark = options.iterations - options.iterations / 10;
    double tail_value = std::numeric_limits<double>::infinity();
    double grad_norm = 0.0;
    Vector u = g * c;
    bool converged = false;
    for (long it = 0; it < options.iterations; ++it) {
      const Vector grad = global.gradient_from_values(c, u);
      const Vector ggrad = g * grad;
      grad_norm = std::sqrt(std::max(0.0, grad.dot(ggrad)));
      if (grad_norm <= options.tolerance) {
        converged = true;
        break;
      }
      if (it == tail_mark) tail_value = global.value_from_values(c, u);
      c -= eta * grad;
      u -= eta * ggrad;
    }
    u = g * c;
    const double value = global.value_from_values(c, u);
    grad_norm = rkhs_norm(g, global.gradient_from_values(c, u));
    if (!converged) {
      converged_all = false;
      if (value >= tail_value) tail_flag = true;
    }
    best.restart_values.push_back(value);
    if (value < best.value) {
      best.value = value;
      best.solution = c;
      best.gradient_norm = grad_norm;
    }
  }
  best.method = "centralized-gd";
  if (!global.convex()) best.notes.emplace_back("possibly-local-minimum");
  if (!converged_all) best.notes.emplace_back("not-converged");
  if (tail_flag) best.notes.emplace_back("non-decreasing-tail");
  if (global.convex()) best.pl_modulus = pl_modulus_of(global);
  return best;
}

OracleReport brute_force_simplex(const std::vector<SimplexFunctional>& functionals, int resolution) {
  if (functionals.empty()) throw Error("dim-mismatch", "no functionals");
  const auto n = functionals.front().linear.size();
  if (n > 4) throw Error("simplex-too-large", "grid search supports n <= 4");
  if (n < 2) throw Error("bad-domain", "simplex needs n >= 2");
  if (resolution < 10) throw Error("bad-resolution", "resolution must be at least 10");

  OracleReport report;
  report.gradient_norm = std::numeric_limits<double>::quiet_NaN();
  report.value = std::numeric_limits<double>::infinity();
  const bool linear = std::all_of(functionals.begin(), functionals.end(),
                                  [](const SimplexFunctional& f) { return f.is_linear(); });
  if (linear) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector e = Vector::Unit(n, j);
      const double v = simplex_objective(functionals, e);
      if (v < report.value) {
        report.value = v;
        report.solution = e;
      }
    }
    report.method = "vertex-enumeration";
    return report;
  }

  std::vector<int> k(static_cast<std::size_t>(n), 0);
  Vector p(n);
  const double inv_r = 1.0 / resolution;
  // Enumerate compositions k_0 + ... + k_{n-1} = r in lexicographic order.
  auto visit = [&](auto&& self, Eigen::Index pos, int left) -> void {
    if (pos == n - 1) {
      k[static_cast<std::size_t>(pos)] = left;
      for (Eigen::Index j = 0; j < n; ++j) p[j] = k[static_cast<std::size_t>(j)] * inv_r;
      const double v = simplex_objective(functionals, p);
      if (v < report.value) {
        report.value = v;
        report.solution = p;
      }
      return;
    }
    for (int a = 0; a <= left; ++a) {
      k[static_cast<std::size_t>(pos)] = a;
      self(self, pos + 1, left - a);
    }
  };
  visit(visit, 0, resolution);
  report.method = "lattice-" + std::to_string(resolution);
  return report;
}

}  // namespace dfo
