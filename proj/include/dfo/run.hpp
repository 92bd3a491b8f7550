#pragma once

#include <string>
#include <vector>

#include "dfo/kernel.hpp"
#include "dfo/network.hpp"

namespace dfo {

enum class StepRule {
  kConstant,      // eta as given
  kInverseSqrtT,  // eta = 1 / sqrt(T)
  kSmoothRate,    // eta = 1 / (2 L sqrt(T + 3))
};

std::string_view to_string(StepRule rule);
StepRule parse_step_rule(std::string_view name);

/// Shared configuration of the DFGD and DFMD engines.
struct RunConfig {
  long iterations = 1;  // T
  StepRule rule = StepRule::kInverseSqrtT;
  double eta = 0.0;         // used by kConstant
  double smoothness = 0.0;  // L, used by kSmoothRate and the step-range warning
  double pl_modulus = 0.0;  // mu, used only by the step-range warning

  /// Per-agent rows (objective, consensus, gradient norm) are recorded at
  /// t = 1, 1 + stride, 1 + 2 stride, ...; 0 records none.
  long record_stride = 0;
  /// Keep coefficient snapshots at each recorded t (needed by ergodic_average).
  bool keep_states = false;
  /// Track |D J(f_lt)| for every agent at every iterate. Costs one extra
  /// N x N x m product per iterate on the RKHS engines.
  bool track_gradient = false;

  double step_size() const;
};
using DfgdConfig = RunConfig;

/// Warnings for a constant step outside 0 < eta < min(2m/mu, 1/(4L)).
/// The range is sufficient for the last-iterate bound, not necessary.
std::vector<std::string> step_range_warnings(double eta, double mu, double smoothness, int agents);

/// Per-iterate record of one engine run over t = 1..T.
struct RunTrajectory {
  long iterations = 0;
  double eta = 0.0;
  long record_stride = 0;
  bool keep_states = false;
  CenterSetPtr centers;  // null for simplex runs

  std::vector<long> recorded_t;
  std::vector<std::vector<Vector>> states;  // [recorded][agent], when keep_states
  std::vector<Vector> objective;            // [recorded] -> J(f_lt) per agent
  std::vector<Vector> consensus;            // [recorded] -> |f_lt - mean_t| per agent
  std::vector<Vector> gradient_norm;        // [recorded] -> |D J(f_lt)|, when tracked

  std::vector<double> max_consensus;       // [t - 1]
  std::vector<double> max_local_gradient;  // [t - 1], max_i |D J_i(f_it)|
  double initial_norm_sum = 0.0;           // sum_i |f_i1|

  std::vector<Vector> final_states;  // f_{i, T+1}
  std::vector<Vector> ergodic;       // (1/T) sum_{t<=T} f_lt
  Vector gradient_sq_mean;           // (1/T) sum_t |D J(f_lt)|^2, when tracked

  std::vector<std::string> warnings;

  /// Largest local gradient norm observed over the run.
  double empirical_g() const;
};

/// Coefficient average of agent `agent` over iterates 1..T. Needs a full
/// record (stride 1 with states); otherwise throws "need-full-record".
Vector ergodic_average(const RunTrajectory& trajectory, int agent, long T);
RkhsFunction ergodic_average_function(const RunTrajectory& trajectory, int agent, long T);

struct ConsensusBoundCheck {
  long iterates = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max over t of consensus / bound
  double empirical_g = 0.0;
};

/// Checks, at every recorded iterate,
///   max_i |f_it - mean_t| <= omega gamma^(t-1) sum_i |f_i1|
///                            + m omega G eta / (sigma (1 - gamma)),
/// with G the empirical maximum local gradient norm of the run.
ConsensusBoundCheck check_consensus_bound(const RunTrajectory& trajectory,
                                          const MixingSchedule& schedule, double modulus = 1.0);

/// out_i = sum_j P_ij h_j. Throws "bad-mixing-matrix" unless P is doubly
/// stochastic with matching size.
std::vector<Vector> mix(const Matrix& p, const std::vector<Vector>& h);

}  // namespace dfo
