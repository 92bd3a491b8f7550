#pragma once

#include <vector>

#include "dfo/network.hpp"
#include "dfo/objective.hpp"
#include "dfo/run.hpp"

namespace dfo {

/// One distributed functional gradient descent iteration:
///   h_i = f_i - eta D J_i(f_i),   f_i' = sum_j [P]_ij h_j.
/// Throws "bad-mixing-matrix" when P is not doubly stochastic.
std::vector<RkhsFunction> dfgd_step(const std::vector<RkhsFunction>& states, const Matrix& p,
                                    const std::vector<LocalRisk>& risks, double eta);

/// Coefficient-level form of dfgd_step.
std::vector<Vector> dfgd_step(const std::vector<Vector>& states, const Matrix& p,
                              const std::vector<LocalRisk>& risks, double eta);

/// Runs t = 1..T with P_t from the schedule, starting from f_{i,1} = initial[i].
RunTrajectory run_dfgd(const RunConfig& config, const MixingSchedule& schedule,
                       const std::vector<LocalRisk>& risks,
                       const std::vector<RkhsFunction>& initial);

/// Zero initial functions f_{i,1} = 0 for every agent.
std::vector<RkhsFunction> zero_states(const CenterSetPtr& centers, std::size_t agents);

/// max_i of LocalRisk::smoothness, the L used by the smooth-rate step rule.
double max_smoothness(const std::vector<LocalRisk>& risks);

}  // namespace dfo
