#pragma once

#include <vector>

#include "dfo/objective.hpp"
#include "dfo/run.hpp"

namespace dfo::detail {

// Records per-iterate metrics of RKHS states into a RunTrajectory. One
// N x N x m product (G C) per iterate, plus one more when the global
// gradient norm is tracked.
class RkhsObserver {
 public:
  RkhsObserver(const RunConfig& config, double eta, const std::vector<LocalRisk>& risks,
               RunTrajectory& out);

  void observe(long t, const std::vector<Vector>& states);
  void finish(std::vector<Vector> final_states);

 private:
  double local_gradient_norm(std::size_t agent, const Vector& coef, const Vector& values) const;

  const RunConfig& config_;
  const std::vector<LocalRisk>& risks_;
  GlobalRisk global_;
  RunTrajectory& out_;
  Matrix sums_;
  Vector grad_sq_sum_;
};

// Validates the schedule over the run horizon; throws "invalid-schedule".
void require_valid_schedule(const MixingSchedule& schedule, long iterations, int agents);

std::vector<Vector> coefficients_of(const std::vector<RkhsFunction>& states,
                                    const CenterSetPtr& centers);

}  // namespace dfo::detail
