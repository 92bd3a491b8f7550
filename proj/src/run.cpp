#include "dfo/run.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dfo/error.hpp"

namespace dfo {

std::string_view to_string(StepRule rule) {
  switch (rule) {
    case StepRule::kConstant: return "constant";
    case StepRule::kInverseSqrtT: return "inv-sqrt-t";
    case StepRule::kSmoothRate: return "smooth-rate";
  }
  return "unknown";
}

StepRule parse_step_rule(std::string_view name) {
  for (auto r : {StepRule::kConstant, StepRule::kInverseSqrtT, StepRule::kSmoothRate}) {
    if (to_string(r) == name) return r;
  }
  throw Error("unknown-step-rule", std::string(name));
}

double RunConfig::step_size() const {
  if (iterations < 1) throw Error("bad-iterations", "T must be at least 1");
  const auto t = static_cast<double>(iterations);
  switch (rule) {
    case StepRule::kConstant:
      if (!(eta >= 0.0)) throw Error("bad-step", "step size must be nonnegative");
      return eta;
    case StepRule::kInverseSqrtT: return 1.0 / std::sqrt(t);
    case StepRule::kSmoothRate:
      if (!(smoothness > 0.0) || !std::isfinite(smoothness)) {
        throw Error("bad-step", "smooth-rate rule needs a finite L > 0");
      }
      return 1.0 / (2.0 * smoothness * std::sqrt(t + 3.0));
  }
  return 0.0;
}

std::vector<std::string> step_range_warnings(double eta, double mu, double smoothness, int agents) {
  std::vector<std::string> out;
  if (!(eta > 0.0)) out.push_back("step must be positive");
  if (smoothness > 0.0 && eta >= 1.0 / (4.0 * smoothness)) {
    std::ostringstream msg;
    msg << "step " << eta << " >= 1/(4L) = " << 1.0 / (4.0 * smoothness);
    out.push_back(msg.str());
  }
  if (mu > 0.0 && eta >= 2.0 * agents / mu) {
    std::ostringstream msg;
    msg << "step " << eta << " >= 2m/mu = " << 2.0 * agents / mu;
    out.push_back(msg.str());
  }
  return out;
}

double RunTrajectory::empirical_g() const {
  return max_local_gradient.empty()
             ? 0.0
             : *std::max_element(max_local_gradient.begin(), max_local_gradient.end());
}

Vector ergodic_average(const RunTrajectory& trajectory, int agent, long T) {
  if (trajectory.record_stride != 1 || !trajectory.keep_states) throw Error("need-full-record");
  if (T < 1 || T > static_cast<long>(trajectory.states.size())) {
    throw Error("bad-window", "T outside the recorded range");
  }
  Vector sum = Vector::Zero(trajectory.states.front().at(static_cast<std::size_t>(agent)).size());
  for (long t = 0; t < T; ++t) sum += trajectory.states[static_cast<std::size_t>(t)][static_cast<std::size_t>(agent)];
  return sum / static_cast<double>(T);
}

RkhsFunction ergodic_average_function(const RunTrajectory& trajectory, int agent, long T) {
  if (!trajectory.centers) throw Error("center-set-mismatch", "trajectory has no center set");
  return {trajectory.centers, ergodic_average(trajectory, agent, T)};
}

ConsensusBoundCheck check_consensus_bound(const RunTrajectory& trajectory,
                                          const MixingSchedule& schedule, double modulus) {
  const int m = schedule.agents();
  const auto [omega, gamma] = mixing_bound_params(m, schedule.zeta(), schedule.window());
  ConsensusBoundCheck out;
  out.empirical_g = trajectory.empirical_g();
  const double drift = m * omega * out.empirical_g * trajectory.eta / (modulus * (1.0 - gamma));
  for (std::size_t k = 0; k < trajectory.max_consensus.size(); ++k) {
    const double bound =
        omega * std::pow(gamma, static_cast<double>(k)) * trajectory.initial_norm_sum + drift;
    const double err = trajectory.max_consensus[k];
    ++out.iterates;
    // Relative slack for rounding when the bound is exactly zero-ish.
    if (err > bound * (1.0 + 1e-12) + 1e-13) ++out.violations;
    if (bound > 0.0) out.worst_ratio = std::max(out.worst_ratio, err / bound);
  }
  return out;
}

std::vector<Vector> mix(const Matrix& p, const std::vector<Vector>& h) {
  const auto m = static_cast<Eigen::Index>(h.size());
  if (p.rows() != m || !is_doubly_stochastic(p)) throw Error("bad-mixing-matrix");
  std::vector<Vector> out(h.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    Vector acc = Vector::Zero(h.front().size());
    for (Eigen::Index j = 0; j < m; ++j) {
      const double w = p(i, j);
      if (w != 0.0) acc += w * h[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = std::move(acc);
  }
  return out;
}

}  // namespace dfo
