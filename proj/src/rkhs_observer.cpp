#include "rkhs_observer.hpp"

#include <cmath>

#include "dfo/error.hpp"

namespace dfo::detail {

RkhsObserver::RkhsObserver(const RunConfig& config, double eta,
                           const std::vector<LocalRisk>& risks, RunTrajectory& out)
    : config_(config), risks_(risks), global_(risks), out_(out) {
  const auto n = global_.centers()->size();
  const auto m = static_cast<Eigen::Index>(risks.size());
  sums_ = Matrix::Zero(n, m);
  grad_sq_sum_ = Vector::Zero(m);
  out_ = RunTrajectory{};
  out_.iterations = config.iterations;
  out_.eta = eta;
  out_.record_stride = config.record_stride;
  out_.keep_states = config.keep_states;
  out_.centers = global_.centers();
  out_.max_consensus.reserve(static_cast<std::size_t>(config.iterations));
  out_.max_local_gradient.reserve(static_cast<std::size_t>(config.iterations));
}

double RkhsObserver::local_gradient_norm(std::size_t agent, const Vector& coef,
                                         const Vector& values) const {
  // D J_i = r c + s with r = scale * lambda and s supported on the agent's
  // own centers, so |D J_i|^2 = r^2 c'Gc + 2 r s'Gc + s'Gs needs only the
  // agent's Gram block.
  const LocalRisk& risk = risks_[agent];
  const auto& idx = risk.indices();
  const auto n = static_cast<Eigen::Index>(idx.size());
  const double r = risk.scale() * risk.lambda();
  const double w = risk.scale() / static_cast<double>(n);
  Vector s(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    s[a] = w * loss_derivative(risk.loss(), values[idx[a]] - risk.data().outputs[a]);
  }
  const Matrix& g = global_.centers()->gram();
  double sgs = 0.0;
  double sgc = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    sgc += s[a] * values[idx[a]];
    for (Eigen::Index b = 0; b < n; ++b) sgs += s[a] * s[b] * g(idx[a], idx[b]);
  }
  const double sq = r * r * coef.dot(values) + 2.0 * r * sgc + sgs;
  return std::sqrt(std::max(0.0, sq));
}

void RkhsObserver::observe(long t, const std::vector<Vector>& states) {
  const auto m = static_cast<Eigen::Index>(states.size());
  const auto n = global_.centers()->size();
  const Matrix& g = global_.centers()->gram();
  Matrix c(n, m);
  for (Eigen::Index i = 0; i < m; ++i) c.col(i) = states[static_cast<std::size_t>(i)];
  const Matrix u = g * c;
  const Vector c_mean = c.rowwise().mean();
  const Vector u_mean = u.rowwise().mean();

  Vector consensus(m);
  double max_cons = 0.0;
  double max_grad = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sq = (c.col(i) - c_mean).dot(u.col(i) - u_mean);
    consensus[i] = std::sqrt(std::max(0.0, sq));
    max_cons = std::max(max_cons, consensus[i]);
    max_grad = std::max(max_grad, local_gradient_norm(static_cast<std::size_t>(i), c.col(i), u.col(i)));
  }
  out_.max_consensus.push_back(max_cons);
  out_.max_local_gradient.push_back(max_grad);
  if (t == 1) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) total += std::sqrt(std::max(0.0, c.col(i).dot(u.col(i))));
    out_.initial_norm_sum = total;
  }
  sums_ += c;

  Vector grad_norm;
  if (config_.track_gradient) {
    Matrix s(n, m);
    for (Eigen::Index i = 0; i < m; ++i) s.col(i) = global_.gradient_from_values(c.col(i), u.col(i));
    const Matrix gs = g * s;
    grad_norm.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double sq = std::max(0.0, s.col(i).dot(gs.col(i)));
      grad_sq_sum_[i] += sq;
      grad_norm[i] = std::sqrt(sq);
    }
  }

  const long stride = config_.record_stride;
  if (stride > 0 && (t - 1) % stride == 0) {
    out_.recorded_t.push_back(t);
    Vector objective(m);
    for (Eigen::Index i = 0; i < m; ++i) objective[i] = global_.value_from_values(c.col(i), u.col(i));
    out_.objective.push_back(std::move(objective));
    out_.consensus.push_back(consensus);
    out_.gradient_norm.push_back(grad_norm);
    if (config_.keep_states) out_.states.push_back(states);
  }
}

void RkhsObserver::finish(std::vector<Vector> final_states) {
  const auto m = sums_.cols();
  const double inv_t = 1.0 / static_cast<double>(config_.iterations);
  out_.ergodic.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out_.ergodic[static_cast<std::size_t>(i)] = sums_.col(i) * inv_t;
  if (config_.track_gradient) out_.gradient_sq_mean = grad_sq_sum_ * inv_t;
  out_.final_states = std::move(final_states);
}

void require_valid_schedule(const MixingSchedule& schedule, long iterations, int agents) {
  if (schedule.agents() != agents) throw Error("dim-mismatch", "schedule size differs from agent count");
  const long horizon = std::max<long>(iterations, schedule.window());
  const auto report = validate_assumption1(schedule, horizon);
  if (!report.passed()) {
    const auto& first = report.issues.front();
    throw Error("invalid-schedule", first.kind + " at t=" + std::to_string(first.t));
  }
}

std::vector<Vector> coefficients_of(const std::vector<RkhsFunction>& states,
                                    const CenterSetPtr& centers) {
  std::vector<Vector> out;
  out.reserve(states.size());
  for (const auto& f : states) {
    if (f.centers() != centers) throw Error("center-set-mismatch");
    out.push_back(f.coefficients());
  }
  return out;
}

}  // namespace dfo::detail
