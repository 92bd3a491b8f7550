#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dfo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Gaussian Mercer kernel K(x, y) = exp(-|x - y|^2 / bandwidth^2).
class GaussianKernel {
 public:
  explicit GaussianKernel(double bandwidth);

  double bandwidth() const { return bandwidth_; }

  double operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  double bandwidth_;
};

/// Symmetric Gram matrix G[j][k] = K(z_j, z_k) of the rows of `points`.
/// Throws "empty-centers" when there are no rows.
Matrix gram_matrix(const GaussianKernel& kernel, const RowMatrix& points);

/// Fixed, ordered set of kernel centers with its cached Gram matrix.
///
/// Every RkhsFunction of one run refers to the same CenterSet instance, so
/// functions are compared by pointer identity. The Gram matrix is computed
/// once on construction and never mutated afterwards.
class CenterSet {
 public:
  /// `points` is N x d, one center per row.
  CenterSet(GaussianKernel kernel, RowMatrix points);

  static std::shared_ptr<const CenterSet> make(GaussianKernel kernel, RowMatrix points) {
    return std::make_shared<const CenterSet>(kernel, std::move(points));
  }

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }

  const GaussianKernel& kernel() const { return kernel_; }
  const RowMatrix& points() const { return points_; }
  const Matrix& gram() const { return gram_; }

  std::span<const double> point(Eigen::Index j) const;

  /// Index of the first center equal (bitwise) to x, if any.
  std::optional<Eigen::Index> find(std::span<const double> x) const;

 private:
  GaussianKernel kernel_;
  RowMatrix points_;
  Matrix gram_;
};

using CenterSetPtr = std::shared_ptr<const CenterSet>;

/// f = sum_j c_j K(z_j, .) over a shared CenterSet.
class RkhsFunction {
 public:
  /// The zero function.
  explicit RkhsFunction(CenterSetPtr centers);
  RkhsFunction(CenterSetPtr centers, Vector coefficients);

  const CenterSetPtr& centers() const { return centers_; }
  const Vector& coefficients() const { return coef_; }
  Vector& coefficients() { return coef_; }

  double operator()(std::span<const double> x) const { return evaluate(x); }
  double evaluate(std::span<const double> x) const;

  /// Values at every center, i.e. G c.
  Vector values_at_centers() const;

  double norm() const;

 private:
  CenterSetPtr centers_;
  Vector coef_;
};

/// <f, g>_H = c^T G c'. Throws "center-set-mismatch".
double rkhs_inner(const RkhsFunction& f, const RkhsFunction& g);

/// sum_k weights[k] * funcs[k]. Throws "center-set-mismatch" when the
/// functions do not share a CenterSet or the lengths differ.
RkhsFunction linear_combine(std::span<const double> weights,
                            std::span<const RkhsFunction> funcs);

/// Unit atom K(z_j, .).
RkhsFunction atom(const CenterSetPtr& centers, Eigen::Index j);

}  // namespace dfo
