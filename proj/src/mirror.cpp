#include "dfo/mirror.hpp"

#include <cmath>

#include "dfo/error.hpp"

namespace dfo {

DecisionDomain DecisionDomain::rkhs_ball(double radius) {
  if (!(radius > 0.0)) throw Error("bad-domain", "ball radius must be positive");
  return {Kind::kRkhsBall, radius, 0};
}

DecisionDomain DecisionDomain::simplex(Eigen::Index n) {
  if (n < 2) throw Error("bad-domain", "simplex needs at least two support points");
  return {Kind::kSimplex, 0.0, n};
}

double MirrorGeometry::bregman(const Vector& f, const Vector& g) const {
  return potential(f) - potential(g) - pairing(f - g, to_dual(g));
}

Vector MirrorGeometry::pull_back(const DecisionDomain& domain, const Vector& h) const {
  return project(domain, from_dual(h));
}

QuadraticGeometry::QuadraticGeometry(CenterSetPtr centers) : centers_(std::move(centers)) {}

double QuadraticGeometry::pairing(const Vector& f, const Vector& dual) const {
  if (!centers_) return f.dot(dual);
  if (f.size() != centers_->size() || dual.size() != centers_->size()) throw Error("dim-mismatch");
  return f.dot(centers_->gram() * dual);
}

double QuadraticGeometry::potential(const Vector& f) const { return 0.5 * pairing(f, f); }

double QuadraticGeometry::norm(const Vector& f) const {
  return std::sqrt(std::max(0.0, pairing(f, f)));
}

double QuadraticGeometry::bregman(const Vector& f, const Vector& g) const {
  const Vector d = f - g;
  return 0.5 * pairing(d, d);
}

Vector QuadraticGeometry::project(const DecisionDomain& domain, const Vector& f) const {
  switch (domain.kind) {
    case DecisionDomain::Kind::kWholeSpace: return f;
    case DecisionDomain::Kind::kRkhsBall: {
      const double r = norm(f);
      return r <= domain.radius ? f : Vector(f * (domain.radius / r));
    }
    case DecisionDomain::Kind::kSimplex: break;
  }
  throw Error("incompatible-domain", "quadratic geometry supports whole-space and rkhs-ball");
}

Vector QuadraticGeometry::pull_back(const DecisionDomain& domain, const Vector& h) const {
  // dPsi^-1 is the identity; skip the copy on the whole space.
  if (domain.kind == DecisionDomain::Kind::kWholeSpace) return h;
  return project(domain, h);
}

EntropyGeometry::EntropyGeometry(Eigen::Index n) : n_(n) {
  if (n < 2) throw Error("bad-domain", "entropy geometry needs n >= 2");
}

double EntropyGeometry::potential(const Vector& p) const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) s += p[j] * std::log(p[j]);
  }
  return s;
}

Vector EntropyGeometry::to_dual(const Vector& p) const {
  if (p.size() != n_) throw Error("dim-mismatch");
  Vector q(n_);
  for (Eigen::Index j = 0; j < n_; ++j) {
    q[j] = 1.0 + (p[j] > 0.0 ? std::max(std::log(p[j]), kLogFloor) : kLogFloor);
  }
  return q;
}

Vector EntropyGeometry::from_dual(const Vector& q) const {
  if (q.size() != n_) throw Error("dim-mismatch");
  return (q.array() - 1.0).exp().matrix();
}

double EntropyGeometry::bregman(const Vector& p, const Vector& q) const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double qj = std::max(q[j], std::exp(kLogFloor));
    if (p[j] > 0.0) s += p[j] * std::log(p[j] / qj);
    s += qj - p[j];
  }
  return s;
}

Vector EntropyGeometry::project(const DecisionDomain& domain, const Vector& p) const {
  switch (domain.kind) {
    case DecisionDomain::Kind::kWholeSpace: return p;
    case DecisionDomain::Kind::kSimplex: {
      if (domain.size != n_) throw Error("dim-mismatch", "simplex size differs from grid size");
      Vector floored = p.cwiseMax(std::exp(kLogFloor));
      return floored / floored.sum();
    }
    case DecisionDomain::Kind::kRkhsBall: break;
  }
  throw Error("incompatible-domain", "entropy geometry supports whole-space and simplex");
}

Vector EntropyGeometry::pull_back(const DecisionDomain& domain, const Vector& h) const {
  if (domain.kind != DecisionDomain::Kind::kSimplex) return project(domain, from_dual(h));
  if (domain.size != n_ || h.size() != n_) throw Error("dim-mismatch");
  const double top = h.maxCoeff();
  Vector w = (h.array() - top).exp().matrix();
  w /= w.sum();
  return w.cwiseMax(std::exp(kLogFloor));
}

std::shared_ptr<const MirrorGeometry> quadratic_geometry(CenterSetPtr centers) {
  return std::make_shared<const QuadraticGeometry>(std::move(centers));
}

std::shared_ptr<const MirrorGeometry> entropy_geometry(Eigen::Index n) {
  return std::make_shared<const EntropyGeometry>(n);
}

}  // namespace dfo
