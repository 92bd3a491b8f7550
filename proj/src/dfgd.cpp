#include "dfo/dfgd.hpp"

#include <algorithm>

#include "dfo/error.hpp"
#include "rkhs_observer.hpp"

namespace dfo {

std::vector<Vector> dfgd_step(const std::vector<Vector>& states, const Matrix& p,
                              const std::vector<LocalRisk>& risks, double eta) {
  if (states.size() != risks.size()) throw Error("dim-mismatch", "one risk per agent");
  if (!(eta >= 0.0)) throw Error("bad-step", "step size must be nonnegative");
  std::vector<Vector> h(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    h[i] = states[i] - eta * risks[i].gradient(states[i]);
  }
  return mix(p, h);
}

std::vector<RkhsFunction> dfgd_step(const std::vector<RkhsFunction>& states, const Matrix& p,
                                    const std::vector<LocalRisk>& risks, double eta) {
  if (states.empty()) throw Error("dim-mismatch", "no agents");
  const auto& centers = states.front().centers();
  for (const auto& r : risks) {
    if (r.centers() != centers) throw Error("center-set-mismatch");
  }
  auto next = dfgd_step(detail::coefficients_of(states, centers), p, risks, eta);
  std::vector<RkhsFunction> out;
  out.reserve(next.size());
  for (auto& c : next) out.emplace_back(centers, std::move(c));
  return out;
}

RunTrajectory run_dfgd(const RunConfig& config, const MixingSchedule& schedule,
                       const std::vector<LocalRisk>& risks,
                       const std::vector<RkhsFunction>& initial) {
  if (risks.empty() || initial.size() != risks.size()) {
    throw Error("dim-mismatch", "one risk and one initial state per agent");
  }
  const double eta = config.step_size();
  detail::require_valid_schedule(schedule, config.iterations, static_cast<int>(risks.size()));
  for (const auto& r : risks) {
    if (r.centers() != initial.front().centers()) throw Error("center-set-mismatch");
  }

  RunTrajectory out;
  detail::RkhsObserver observer(config, eta, risks, out);
  if (config.rule == StepRule::kConstant) {
    out.warnings = step_range_warnings(eta, config.pl_modulus, config.smoothness,
                                       static_cast<int>(risks.size()));
  }
  auto states = detail::coefficients_of(initial, initial.front().centers());
  for (long t = 1; t <= config.iterations; ++t) {
    observer.observe(t, states);
    states = dfgd_step(states, schedule.at(t), risks, eta);
  }
  observer.finish(std::move(states));
  return out;
}

std::vector<RkhsFunction> zero_states(const CenterSetPtr& centers, std::size_t agents) {
  return std::vector<RkhsFunction>(agents, RkhsFunction(centers));
}

double max_smoothness(const std::vector<LocalRisk>& risks) {
  double l = 0.0;
  for (const auto& r : risks) l = std::max(l, r.smoothness());
  return l;
}

}  // namespace dfo
