#include "dfo/dfmd.hpp"

#include <cmath>

#include "dfo/error.hpp"
#include "rkhs_observer.hpp"

namespace dfo {

std::vector<Vector> dfmd_step(const std::vector<Vector>& states, const Matrix& p,
                              const std::vector<Vector>& subgradients, double eta,
                              const MirrorGeometry& geometry, const DecisionDomain& domain) {
  if (states.size() != subgradients.size()) throw Error("dim-mismatch", "one subgradient per agent");
  if (!(eta >= 0.0)) throw Error("bad-step", "step size must be nonnegative");
  std::vector<Vector> projected(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Vector h = geometry.to_dual(states[i]) - eta * subgradients[i];
    projected[i] = geometry.pull_back(domain, h);
  }
  return mix(p, projected);
}

RunTrajectory run_dfmd(const RunConfig& config, const MixingSchedule& schedule,
                       const std::vector<LocalRisk>& risks,
                       const std::vector<RkhsFunction>& initial, const MirrorGeometry& geometry,
                       const DecisionDomain& domain) {
  if (risks.empty() || initial.size() != risks.size()) {
    throw Error("dim-mismatch", "one risk and one initial state per agent");
  }
  for (const auto& r : risks) {
    if (!r.loss().convex()) throw Error("nonconvex-loss", "DFMD requires convex losses");
    if (r.centers() != initial.front().centers()) throw Error("center-set-mismatch");
  }
  const double eta = config.step_size();
  detail::require_valid_schedule(schedule, config.iterations, static_cast<int>(risks.size()));

  RunTrajectory out;
  detail::RkhsObserver observer(config, eta, risks, out);
  auto states = detail::coefficients_of(initial, initial.front().centers());
  std::vector<Vector> grads(states.size());
  for (long t = 1; t <= config.iterations; ++t) {
    observer.observe(t, states);
    for (std::size_t i = 0; i < states.size(); ++i) grads[i] = risks[i].gradient(states[i]);
    states = dfmd_step(states, schedule.at(t), grads, eta, geometry, domain);
  }
  observer.finish(std::move(states));
  return out;
}

ProbabilityVector ProbabilityVector::uniform(Eigen::Index n) {
  if (n < 1) throw Error("bad-domain", "empty probability vector");
  return ProbabilityVector(Vector::Constant(n, -std::log(static_cast<double>(n))));
}

ProbabilityVector ProbabilityVector::from_weights(const Vector& weights) {
  if (weights.size() < 1 || (weights.array() < 0.0).any() || !(weights.sum() > 0.0)) {
    throw Error("bad-domain", "weights must be nonnegative with positive mass");
  }
  Vector logs(weights.size());
  const double log_total = std::log(weights.sum());
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    const double lw = weights[j] > 0.0 ? std::log(weights[j]) : EntropyGeometry::kLogFloor;
    logs[j] = std::max(lw - log_total, EntropyGeometry::kLogFloor);
  }
  return ProbabilityVector(std::move(logs));
}

ProbabilityVector ProbabilityVector::from_log_weights(Vector log_weights) {
  if (log_weights.size() < 1) throw Error("bad-domain", "empty probability vector");
  const double top = log_weights.maxCoeff();
  const double lse = top + std::log((log_weights.array() - top).exp().sum());
  log_weights.array() -= lse;
  log_weights = log_weights.cwiseMax(EntropyGeometry::kLogFloor);
  return ProbabilityVector(std::move(log_weights));
}

Vector ProbabilityVector::weights() const { return log_weights_.array().exp().matrix(); }

double SimplexFunctional::value(const Vector& p) const {
  double v = linear.dot(p);
  if (curvature != 0.0) v += 0.5 * curvature * (p - anchor).squaredNorm();
  return v;
}

Vector SimplexFunctional::gradient(const Vector& p) const {
  if (curvature == 0.0) return linear;
  return linear + curvature * (p - anchor);
}

double simplex_objective(const std::vector<SimplexFunctional>& functionals, const Vector& p) {
  double v = 0.0;
  for (const auto& f : functionals) v += f.value(p);
  return v;
}

RunTrajectory run_ms_dfmd(const RunConfig& config, const MixingSchedule& schedule,
                          const std::vector<SimplexFunctional>& functionals,
                          const std::vector<ProbabilityVector>& initial) {
  const auto m = static_cast<Eigen::Index>(functionals.size());
  if (m == 0 || static_cast<Eigen::Index>(initial.size()) != m) {
    throw Error("dim-mismatch", "one functional and one initial distribution per agent");
  }
  const Eigen::Index n = initial.front().size();
  for (const auto& f : functionals) {
    if (f.linear.size() != n || (f.curvature != 0.0 && f.anchor.size() != n)) {
      throw Error("dim-mismatch", "functional size differs from grid size");
    }
    if (f.curvature < 0.0) throw Error("nonconvex-loss", "curvature must be nonnegative");
  }
  const double eta = config.step_size();
  detail::require_valid_schedule(schedule, config.iterations, static_cast<int>(m));
  const EntropyGeometry geometry(n);
  const auto domain = DecisionDomain::simplex(n);

  RunTrajectory out;
  out.iterations = config.iterations;
  out.eta = eta;
  out.record_stride = config.record_stride;
  out.keep_states = config.keep_states;

  std::vector<Vector> states;
  for (const auto& pv : initial) states.push_back(pv.weights());
  Matrix sums = Matrix::Zero(n, m);
  Vector grad_sq = Vector::Zero(m);
  std::vector<Vector> grads(static_cast<std::size_t>(m));

  for (long t = 1; t <= config.iterations; ++t) {
    Vector mean = Vector::Zero(n);
    for (const auto& s : states) mean += s;
    mean /= static_cast<double>(m);
    Vector consensus(m);
    double max_cons = 0.0, max_grad = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      consensus[i] = (states[k] - mean).lpNorm<1>();
      max_cons = std::max(max_cons, consensus[i]);
      grads[k] = functionals[k].gradient(states[k]);
      max_grad = std::max(max_grad, grads[k].lpNorm<Eigen::Infinity>());
      sums.col(i) += states[k];
    }
    out.max_consensus.push_back(max_cons);
    out.max_local_gradient.push_back(max_grad);
    if (t == 1) {
      for (const auto& s : states) out.initial_norm_sum += s.lpNorm<1>();
    }
    Vector grad_norm;
    if (config.track_gradient) {
      grad_norm.resize(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        Vector g = Vector::Zero(n);
        for (const auto& f : functionals) g += f.gradient(states[static_cast<std::size_t>(i)]);
        grad_norm[i] = g.lpNorm<Eigen::Infinity>();
        grad_sq[i] += grad_norm[i] * grad_norm[i];
      }
    }
    if (config.record_stride > 0 && (t - 1) % config.record_stride == 0) {
      out.recorded_t.push_back(t);
      Vector objective(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        objective[i] = simplex_objective(functionals, states[static_cast<std::size_t>(i)]);
      }
      out.objective.push_back(std::move(objective));
      out.consensus.push_back(consensus);
      out.gradient_norm.push_back(grad_norm);
      if (config.keep_states) out.states.push_back(states);
    }
    states = dfmd_step(states, schedule.at(t), grads, eta, geometry, domain);
  }

  const double inv_t = 1.0 / static_cast<double>(config.iterations);
  for (Eigen::Index i = 0; i < m; ++i) out.ergodic.push_back(sums.col(i) * inv_t);
  if (config.track_gradient) out.gradient_sq_mean = grad_sq * inv_t;
  out.final_states = std::move(states);
  return out;
}

}  // namespace dfo
