#include "dfo/loss.hpp"

#include <cmath>
#include <string>

#include "dfo/error.hpp"

namespace dfo {

LossSpec::LossSpec(LossKind k, double s) : kind(k), sigma(s) {
  if (!quadratic() && !(s > 0.0)) throw Error("bad-sigma", "robust losses need sigma > 0");
}

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kHalfSquared: return "half-squared";
    case LossKind::kSquared: return "squared";
    case LossKind::kWelsch: return "welsch";
    case LossKind::kCauchy: return "cauchy";
    case LossKind::kFair: return "fair";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  for (auto k : {LossKind::kHalfSquared, LossKind::kSquared, LossKind::kWelsch,
                 LossKind::kCauchy, LossKind::kFair}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown-loss", std::string(name));
}

double loss_value(const LossSpec& spec, double u) {
  const double s = spec.sigma;
  switch (spec.kind) {
    case LossKind::kHalfSquared: return 0.5 * u * u;
    case LossKind::kSquared: return u * u;
    case LossKind::kWelsch: return -s * s * std::expm1(-u * u / (2.0 * s * s));
    case LossKind::kCauchy: return s * s * std::log1p(u * u / (2.0 * s * s));
    case LossKind::kFair: {
      const double a = std::abs(u) / s;
      return s * s * (a - std::log1p(a));
    }
  }
  return 0.0;
}

double loss_derivative(const LossSpec& spec, double u) {
  const double s = spec.sigma;
  switch (spec.kind) {
    case LossKind::kHalfSquared: return u;
    case LossKind::kSquared: return 2.0 * u;
    case LossKind::kWelsch: return u * std::exp(-u * u / (2.0 * s * s));
    case LossKind::kCauchy: return u / (1.0 + u * u / (2.0 * s * s));
    case LossKind::kFair: return u / (1.0 + std::abs(u) / s);
  }
  return 0.0;
}

SmoothnessBounds smoothness_bounds(const LossSpec& spec) {
  const double s = spec.sigma;
  switch (spec.kind) {
    case LossKind::kHalfSquared: return {1.0, std::nullopt};
    case LossKind::kSquared: return {2.0, std::nullopt};
    // L'' = exp(-u^2/2s^2)(1 - u^2/s^2) peaks at u = 0; L' peaks at u = s.
    case LossKind::kWelsch: return {1.0, s * std::exp(-0.5)};
    // L'' = (1 - u^2/2s^2)/(1 + u^2/2s^2)^2 peaks at u = 0; L' peaks at u = s sqrt(2).
    case LossKind::kCauchy: return {1.0, s / std::sqrt(2.0)};
    // L'' = 1/(1 + |u|/s)^2; |L'| increases to s as |u| grows.
    case LossKind::kFair: return {1.0, s};
  }
  return {};
}

}  // namespace dfo
