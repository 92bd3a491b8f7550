#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace dfo {

enum class LossKind { kHalfSquared, kSquared, kWelsch, kCauchy, kFair };

/// Scalar regression loss of the residual u = f(x) - y.
///
/// The robust kinds take the windowed form sigma^2 W(u^2 / sigma^2):
///   welsch  sigma^2 (1 - exp(-u^2 / (2 sigma^2)))
///   cauchy  sigma^2 log(1 + u^2 / (2 sigma^2))
///   fair    sigma^2 (|u|/sigma - log(1 + |u|/sigma))
/// `sigma` is ignored by the two quadratic kinds.
struct LossSpec {
  LossKind kind = LossKind::kHalfSquared;
  double sigma = 1.0;

  LossSpec() = default;
  LossSpec(LossKind k, double s = 1.0);

  /// Welsch and Cauchy are nonconvex in u and must only be used with the
  /// gradient-descent engine.
  bool convex() const { return kind != LossKind::kWelsch && kind != LossKind::kCauchy; }

  bool quadratic() const {
    return kind == LossKind::kHalfSquared || kind == LossKind::kSquared;
  }
};

/// "half-squared", "squared", "welsch", "cauchy", "fair".
std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

double loss_value(const LossSpec& spec, double u);
double loss_derivative(const LossSpec& spec, double u);

/// Global bounds on |L''| and |L'|; an empty optional means unbounded.
struct SmoothnessBounds {
  std::optional<double> second_derivative;
  std::optional<double> derivative;
};

SmoothnessBounds smoothness_bounds(const LossSpec& spec);

}  // namespace dfo
