#pragma once

#include <memory>

#include "dfo/kernel.hpp"

namespace dfo {

/// Closed convex decision set W.
struct DecisionDomain {
  enum class Kind { kWholeSpace, kRkhsBall, kSimplex };

  Kind kind = Kind::kWholeSpace;
  double radius = 0.0;    // kRkhsBall
  Eigen::Index size = 0;  // kSimplex grid size

  static DecisionDomain whole_space() { return {}; }
  static DecisionDomain rkhs_ball(double radius);
  static DecisionDomain simplex(Eigen::Index n);
};

/// Mirror map Psi with its gradient map, inverse, Bregman divergence and
/// Bregman projection. Dual points are represented in the same coordinates
/// as primal points; `pairing` is the duality bracket <f, g>.
class MirrorGeometry {
 public:
  virtual ~MirrorGeometry() = default;

  /// sigma_Psi with respect to norm().
  virtual double modulus() const = 0;

  virtual double potential(const Vector& f) const = 0;
  virtual Vector to_dual(const Vector& f) const = 0;
  virtual Vector from_dual(const Vector& h) const = 0;
  virtual double pairing(const Vector& f, const Vector& dual) const = 0;

  virtual double norm(const Vector& f) const = 0;
  virtual double dual_norm(const Vector& g) const = 0;

  /// D(f || g) = Psi(f) - Psi(g) - <f - g, dPsi(g)>.
  virtual double bregman(const Vector& f, const Vector& g) const;

  /// argmin_{w in W} D(w || f).
  virtual Vector project(const DecisionDomain& domain, const Vector& f) const = 0;

  /// project(domain, from_dual(h)); overridden where a fused form is more
  /// stable.
  virtual Vector pull_back(const DecisionDomain& domain, const Vector& h) const;
};

/// Psi(f) = |f|^2 / 2 in the RKHS metric of `centers` (Euclidean when null).
/// sigma = 1, dPsi is the identity and the ball projection is radial.
class QuadraticGeometry final : public MirrorGeometry {
 public:
  explicit QuadraticGeometry(CenterSetPtr centers = nullptr);

  double modulus() const override { return 1.0; }
  double potential(const Vector& f) const override;
  Vector to_dual(const Vector& f) const override { return f; }
  Vector from_dual(const Vector& h) const override { return h; }
  double pairing(const Vector& f, const Vector& dual) const override;
  double norm(const Vector& f) const override;
  double dual_norm(const Vector& g) const override { return norm(g); }
  double bregman(const Vector& f, const Vector& g) const override;
  Vector project(const DecisionDomain& domain, const Vector& f) const override;
  Vector pull_back(const DecisionDomain& domain, const Vector& h) const override;

 private:
  CenterSetPtr centers_;
};

/// Negative entropy Psi(p) = sum p_j log p_j on a grid of n support points.
/// sigma = 1 in the 1-norm (Pinsker). dPsi(p) = 1 + log p,
/// dPsi^-1(q) = exp(q - 1), and the KL projection onto the simplex is
/// normalization. Weights are floored at exp(-700) before taking logs.
class EntropyGeometry final : public MirrorGeometry {
 public:
  explicit EntropyGeometry(Eigen::Index n);

  static constexpr double kLogFloor = -700.0;

  Eigen::Index size() const { return n_; }

  double modulus() const override { return 1.0; }
  double potential(const Vector& p) const override;
  Vector to_dual(const Vector& p) const override;
  Vector from_dual(const Vector& q) const override;
  double pairing(const Vector& f, const Vector& dual) const override { return f.dot(dual); }
  double norm(const Vector& f) const override { return f.lpNorm<1>(); }
  double dual_norm(const Vector& g) const override { return g.lpNorm<Eigen::Infinity>(); }
  /// Generalized KL: sum p log(p/q) - p + q (plain KL on the simplex).
  double bregman(const Vector& p, const Vector& q) const override;
  Vector project(const DecisionDomain& domain, const Vector& p) const override;
  /// Log-sum-exp normalization of exp(h - 1).
  Vector pull_back(const DecisionDomain& domain, const Vector& h) const override;

 private:
  Eigen::Index n_;
};

std::shared_ptr<const MirrorGeometry> quadratic_geometry(CenterSetPtr centers = nullptr);
std::shared_ptr<const MirrorGeometry> entropy_geometry(Eigen::Index n);

}  // namespace dfo
