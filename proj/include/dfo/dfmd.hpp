#pragma once

#include <vector>

#include "dfo/mirror.hpp"
#include "dfo/network.hpp"
#include "dfo/objective.hpp"
#include "dfo/run.hpp"

namespace dfo {

/// One distributed functional mirror descent iteration:
///   g_i = dPsi(f_i),  h_i = g_i - eta * subgradient_i,
///   fhat_i = Proj_W(dPsi^-1(h_i)),  f_i' = sum_j [P]_ij fhat_j.
/// With the entropy geometry on the simplex this is the multiplicative
/// update p <- p * exp(-eta g) / Z followed by mixing.
std::vector<Vector> dfmd_step(const std::vector<Vector>& states, const Matrix& p,
                              const std::vector<Vector>& subgradients, double eta,
                              const MirrorGeometry& geometry, const DecisionDomain& domain);

/// DFMD over the RKHS for convex losses ("nonconvex-loss" otherwise).
RunTrajectory run_dfmd(const RunConfig& config, const MixingSchedule& schedule,
                       const std::vector<LocalRisk>& risks,
                       const std::vector<RkhsFunction>& initial, const MirrorGeometry& geometry,
                       const DecisionDomain& domain);

/// Discretized probability measure on n support points, stored as
/// log-weights so every weight stays strictly positive.
class ProbabilityVector {
 public:
  static ProbabilityVector uniform(Eigen::Index n);
  /// Normalizes nonnegative weights; zeros are floored at exp(-700).
  static ProbabilityVector from_weights(const Vector& weights);
  static ProbabilityVector from_log_weights(Vector log_weights);

  Eigen::Index size() const { return log_weights_.size(); }
  const Vector& log_weights() const { return log_weights_; }
  Vector weights() const;

 private:
  explicit ProbabilityVector(Vector log_weights) : log_weights_(std::move(log_weights)) {}
  Vector log_weights_;
};

/// Convex local functional on the simplex,
///   J_i(p) = <linear, p> + (curvature / 2) |p - anchor|_2^2.
struct SimplexFunctional {
  Vector linear;
  double curvature = 0.0;
  Vector anchor;  // ignored when curvature == 0

  double value(const Vector& p) const;
  Vector gradient(const Vector& p) const;
  bool is_linear() const { return curvature == 0.0; }
};

/// J = sum_i J_i.
double simplex_objective(const std::vector<SimplexFunctional>& functionals, const Vector& p);

/// MS-DFMD: dfmd_step with the entropy geometry on the simplex. The
/// trajectory's consensus errors use the 1-norm and gradient norms the
/// infinity norm (the dual pair for which the entropy is 1-strongly convex).
RunTrajectory run_ms_dfmd(const RunConfig& config, const MixingSchedule& schedule,
                          const std::vector<SimplexFunctional>& functionals,
                          const std::vector<ProbabilityVector>& initial);

}  // namespace dfo
