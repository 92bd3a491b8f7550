#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfo/dfmd.hpp"
#include "dfo/objective.hpp"

namespace dfo {

/// Centralized reference solution f* with J(f*).
struct OracleReport {
  std::string method;
  Vector solution;  // RKHS coefficients, or simplex weights
  double value = 0.0;
  /// |D J(f*)|_H for RKHS problems; NaN for simplex problems.
  double gradient_norm = 0.0;
  std::optional<double> pl_modulus;
  /// Endpoint value of each start (zero start first); gradient descent only.
  std::vector<double> restart_values;
  /// "possibly-local-minimum", "not-converged", "non-decreasing-tail".
  std::vector<std::string> notes;

  double restart_spread() const;
};

/// Minimizer of a least-squares GlobalRisk (half-squared or squared losses)
/// from its normal equations in coefficient space. With no regularization
/// the minimum-norm least-squares coefficients are returned, so singular
/// Gram matrices are handled. pl_modulus is min_i(lambda_i * scale_i) when
/// positive. Throws "not-least-squares" for other losses.
OracleReport solve_ls_pooled(const GlobalRisk& global);

struct GdOracleOptions {
  long iterations = 200000;
  double eta = 0.0;  // 0: 1 / L_J
  int restarts = 0;  // random starts in addition to the zero function
  std::uint64_t seed = 0;
  double tolerance = 1e-10;  // stop once |D J|_H falls below this
};

/// Full-gradient descent on J from f = 0 and `restarts` random starts;
/// returns the lowest endpoint (ties to the lowest start index).
OracleReport solve_centralized_gd(const GlobalRisk& global, const GdOracleOptions& options = {});

/// Smoothness of J itself: sup|L''| * lambda_max(W^1/2 G_SS W^1/2) + sum scale_i lambda_i,
/// with G_SS the Gram matrix over all samples and W the sample weights scale_i / n_i.
double global_smoothness(const GlobalRisk& global);

/// Minimizes sum_i J_i over the simplex lattice {k / r}. Exact (vertex
/// enumeration) when every functional is linear. Throws "simplex-too-large"
/// for n > 4 and "bad-resolution" for r < 10.
OracleReport brute_force_simplex(const std::vector<SimplexFunctional>& functionals, int resolution);

}  // namespace dfo
