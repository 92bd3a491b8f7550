#include "dfo/kernel.hpp"

#include <cmath>

#include "dfo/error.hpp"

namespace dfo {

GaussianKernel::GaussianKernel(double bandwidth) : bandwidth_(bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error("bad-bandwidth", "gaussian bandwidth must be positive");
  }
}

double GaussianKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw Error("dim-mismatch");
  double sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    sq += diff * diff;
  }
  return std::exp(-sq / (bandwidth_ * bandwidth_));
}

Matrix gram_matrix(const GaussianKernel& kernel, const RowMatrix& points) {
  const Eigen::Index n = points.rows();
  if (n == 0) throw Error("empty-centers");
  const auto d = static_cast<std::size_t>(points.cols());
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    g(j, j) = 1.0;
    std::span<const double> zj(points.row(j).data(), d);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double v = kernel(zj, std::span<const double>(points.row(k).data(), d));
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

CenterSet::CenterSet(GaussianKernel kernel, RowMatrix points)
    : kernel_(kernel), points_(std::move(points)), gram_(gram_matrix(kernel_, points_)) {}

std::span<const double> CenterSet::point(Eigen::Index j) const {
  return {points_.row(j).data(), static_cast<std::size_t>(points_.cols())};
}

std::optional<Eigen::Index> CenterSet::find(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != dim()) throw Error("dim-mismatch");
  for (Eigen::Index j = 0; j < size(); ++j) {
    auto z = point(j);
    bool same = true;
    for (std::size_t k = 0; k < x.size() && same; ++k) same = z[k] == x[k];
    if (same) return j;
  }
  return std::nullopt;
}

RkhsFunction::RkhsFunction(CenterSetPtr centers)
    : centers_(std::move(centers)), coef_(Vector::Zero(centers_->size())) {}

RkhsFunction::RkhsFunction(CenterSetPtr centers, Vector coefficients)
    : centers_(std::move(centers)), coef_(std::move(coefficients)) {
  if (coef_.size() != centers_->size()) {
    throw Error("dim-mismatch", "coefficient count differs from center count");
  }
}

double RkhsFunction::evaluate(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != centers_->dim()) throw Error("dim-mismatch");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < coef_.size(); ++j) {
    if (coef_[j] != 0.0) sum += coef_[j] * centers_->kernel()(centers_->point(j), x);
  }
  return sum;
}

Vector RkhsFunction::values_at_centers() const { return centers_->gram() * coef_; }

double RkhsFunction::norm() const {
  return std::sqrt(std::max(0.0, coef_.dot(centers_->gram() * coef_)));
}

double rkhs_inner(const RkhsFunction& f, const RkhsFunction& g) {
  if (f.centers() != g.centers()) throw Error("center-set-mismatch");
  return f.coefficients().dot(f.centers()->gram() * g.coefficients());
}

RkhsFunction linear_combine(std::span<const double> weights,
                            std::span<const RkhsFunction> funcs) {
  if (funcs.empty() || weights.size() != funcs.size()) {
    throw Error("center-set-mismatch", "weights and functions differ in length");
  }
  const auto& centers = funcs.front().centers();
  Vector out = Vector::Zero(centers->size());
  for (std::size_t k = 0; k < funcs.size(); ++k) {
    if (funcs[k].centers() != centers) throw Error("center-set-mismatch");
    out += weights[k] * funcs[k].coefficients();
  }
  return {centers, std::move(out)};
}

RkhsFunction atom(const CenterSetPtr& centers, Eigen::Index j) {
  Vector c = Vector::Zero(centers->size());
  c[j] = 1.0;
  return {centers, std::move(c)};
}

}  // namespace dfo
