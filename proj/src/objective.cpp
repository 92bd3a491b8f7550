#include "dfo/objective.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "dfo/error.hpp"

namespace dfo {

namespace {

std::span<const double> row_span(const RowMatrix& m, Eigen::Index r) {
  return {m.row(r).data(), static_cast<std::size_t>(m.cols())};
}

void require_same_centers(const CenterSetPtr& a, const CenterSetPtr& b) {
  if (a != b) throw Error("center-set-mismatch");
}

}  // namespace

LocalRisk::LocalRisk(LocalData data, LossSpec loss, double lambda, double scale,
                     CenterSetPtr centers)
    : data_(std::move(data)), loss_(loss), lambda_(lambda), scale_(scale),
      centers_(std::move(centers)) {
  if (data_.inputs.cols() != centers_->dim()) throw Error("dim-mismatch");
  indices_.reserve(static_cast<std::size_t>(data_.size()));
  for (Eigen::Index s = 0; s < data_.size(); ++s) {
    auto idx = centers_->find(row_span(data_.inputs, s));
    if (!idx) {
      throw Error("center-not-registered",
                  "agent " + std::to_string(data_.agent) + " sample " + std::to_string(s));
    }
    indices_.push_back(*idx);
  }
  check();
}

LocalRisk::LocalRisk(LocalData data, LossSpec loss, double lambda, double scale,
                     CenterSetPtr centers, std::vector<Eigen::Index> indices)
    : data_(std::move(data)), loss_(loss), lambda_(lambda), scale_(scale),
      centers_(std::move(centers)), indices_(std::move(indices)) {
  if (data_.inputs.cols() != centers_->dim()) throw Error("dim-mismatch");
  for (auto idx : indices_) {
    if (idx < 0 || idx >= centers_->size()) throw Error("center-not-registered");
  }
  check();
}

void LocalRisk::check() const {
  if (data_.size() < 1) throw Error("empty-data", "each agent needs at least one sample");
  if (data_.inputs.rows() != data_.size()) throw Error("dim-mismatch", "inputs/outputs length");
  if (static_cast<Eigen::Index>(indices_.size()) != data_.size()) {
    throw Error("dim-mismatch", "one center index per sample");
  }
  if (!(lambda_ >= 0.0)) throw Error("bad-lambda", "regularization must be nonnegative");
}

Vector LocalRisk::predictions(const Vector& coef) const {
  if (coef.size() != centers_->size()) throw Error("dim-mismatch");
  const Matrix& g = centers_->gram();
  Vector out(data_.size());
  for (Eigen::Index s = 0; s < data_.size(); ++s) out[s] = g.col(indices_[s]).dot(coef);
  return out;
}

double LocalRisk::value(const Vector& coef) const {
  const Vector pred = predictions(coef);
  double sum = 0.0;
  for (Eigen::Index s = 0; s < data_.size(); ++s) sum += loss_value(loss_, pred[s] - data_.outputs[s]);
  double v = sum / static_cast<double>(data_.size());
  if (lambda_ != 0.0) v += 0.5 * lambda_ * coef.dot(centers_->gram() * coef);
  return scale_ * v;
}

double LocalRisk::value_from_values(const Vector& coef, const Vector& gram_coef) const {
  double sum = 0.0;
  for (Eigen::Index s = 0; s < data_.size(); ++s) {
    sum += loss_value(loss_, gram_coef[indices_[s]] - data_.outputs[s]);
  }
  double v = sum / static_cast<double>(data_.size());
  if (lambda_ != 0.0) v += 0.5 * lambda_ * coef.dot(gram_coef);
  return scale_ * v;
}

Vector LocalRisk::gradient(const Vector& coef) const {
  const Vector pred = predictions(coef);
  Vector out = (scale_ * lambda_) * coef;
  const double w = scale_ / static_cast<double>(data_.size());
  for (Eigen::Index s = 0; s < data_.size(); ++s) {
    out[indices_[s]] += w * loss_derivative(loss_, pred[s] - data_.outputs[s]);
  }
  return out;
}

void LocalRisk::add_gradient_from_values(const Vector& coef, const Vector& gram_coef,
                                         double weight, Vector& out) const {
  if (lambda_ != 0.0) out += (weight * scale_ * lambda_) * coef;
  const double w = weight * scale_ / static_cast<double>(data_.size());
  for (Eigen::Index s = 0; s < data_.size(); ++s) {
    out[indices_[s]] += w * loss_derivative(loss_, gram_coef[indices_[s]] - data_.outputs[s]);
  }
}

double LocalRisk::smoothness() const {
  const auto bounds = smoothness_bounds(loss_);
  if (!bounds.second_derivative) return std::numeric_limits<double>::infinity();
  const auto n = static_cast<Eigen::Index>(indices_.size());
  Matrix block(n, n);
  const Matrix& g = centers_->gram();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) block(a, b) = g(indices_[a], indices_[b]);
  }
  const double top = Eigen::SelfAdjointEigenSolver<Matrix>(block, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .maxCoeff();
  return scale_ * (*bounds.second_derivative * top / static_cast<double>(n) + lambda_);
}

GlobalRisk::GlobalRisk(std::vector<LocalRisk> locals) : locals_(std::move(locals)) {
  if (locals_.empty()) throw Error("empty-data", "global risk needs at least one agent");
  for (const auto& r : locals_) require_same_centers(r.centers(), locals_.front().centers());
}

double GlobalRisk::value(const Vector& coef) const {
  return value_from_values(coef, centers()->gram() * coef);
}

double GlobalRisk::value_from_values(const Vector& coef, const Vector& gram_coef) const {
  double v = 0.0;
  for (const auto& r : locals_) v += r.value_from_values(coef, gram_coef);
  return v;
}

Vector GlobalRisk::gradient(const Vector& coef) const {
  return gradient_from_values(coef, centers()->gram() * coef);
}

Vector GlobalRisk::gradient_from_values(const Vector& coef, const Vector& gram_coef) const {
  Vector out = Vector::Zero(coef.size());
  for (const auto& r : locals_) r.add_gradient_from_values(coef, gram_coef, 1.0, out);
  return out;
}

double GlobalRisk::regularization() const {
  double total = 0.0;
  for (const auto& r : locals_) total += r.scale() * r.lambda();
  return total;
}

bool GlobalRisk::convex() const {
  for (const auto& r : locals_) {
    if (!r.loss().convex()) return false;
  }
  return true;
}

double risk_value(const LocalRisk& risk, const RkhsFunction& f) {
  require_same_centers(risk.centers(), f.centers());
  return risk.value(f.coefficients());
}

RkhsFunction frechet_gradient(const LocalRisk& risk, const RkhsFunction& f) {
  require_same_centers(risk.centers(), f.centers());
  return {f.centers(), risk.gradient(f.coefficients())};
}

double global_value(const GlobalRisk& global, const RkhsFunction& f) {
  require_same_centers(global.centers(), f.centers());
  return global.value(f.coefficients());
}

RkhsFunction global_gradient(const GlobalRisk& global, const RkhsFunction& f) {
  require_same_centers(global.centers(), f.centers());
  return {f.centers(), global.gradient(f.coefficients())};
}

double directional_fd_check(const LocalRisk& risk, const RkhsFunction& f,
                            const RkhsFunction& direction, double h) {
  if (!(h > 0.0)) throw Error("bad-step", "finite-difference step must be positive");
  require_same_centers(f.centers(), direction.centers());
  const Vector& c = f.coefficients();
  const Vector& d = direction.coefficients();
  if (d.isZero(0.0)) return 0.0;
  const double fd = (risk.value(c + h * d) - risk.value(c - h * d)) / (2.0 * h);
  const double analytic = rkhs_inner(frechet_gradient(risk, f), direction);
  return std::abs(fd - analytic) / (std::abs(analytic) + 1e-12);
}

}  // namespace dfo
