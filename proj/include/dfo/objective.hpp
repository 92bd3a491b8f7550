#pragma once

#include <vector>

#include "dfo/kernel.hpp"
#include "dfo/loss.hpp"

namespace dfo {

/// One agent's private sample D_i = {(x_is, y_is)}.
struct LocalData {
  int agent = 0;
  RowMatrix inputs;  // n_i x d
  Vector outputs;    // n_i

  Eigen::Index size() const { return outputs.size(); }
};

/// Empirical risk of one agent,
///   J_i(f) = scale * [ (1/n_i) sum_s L(f(x_is) - y_is) + (lambda/2) |f|_H^2 ].
///
/// Every data input must be one of the centers; the risk keeps the center
/// index of each sample so that evaluation and gradients only touch the
/// agent's own rows of the Gram matrix.
class LocalRisk {
 public:
  /// Resolves each input against `centers`; throws "center-not-registered".
  LocalRisk(LocalData data, LossSpec loss, double lambda, double scale, CenterSetPtr centers);
  /// Uses known center indices (one per sample).
  LocalRisk(LocalData data, LossSpec loss, double lambda, double scale, CenterSetPtr centers,
            std::vector<Eigen::Index> indices);

  const LocalData& data() const { return data_; }
  const LossSpec& loss() const { return loss_; }
  double lambda() const { return lambda_; }
  double scale() const { return scale_; }
  const CenterSetPtr& centers() const { return centers_; }
  const std::vector<Eigen::Index>& indices() const { return indices_; }

  /// f(x_is) for every own sample, from the coefficient vector.
  Vector predictions(const Vector& coef) const;

  double value(const Vector& coef) const;
  /// Same value when G c is already known.
  double value_from_values(const Vector& coef, const Vector& gram_coef) const;

  /// Coefficient vector of the Frechet derivative at `coef`.
  Vector gradient(const Vector& coef) const;
  /// out += weight * gradient, given G c.
  void add_gradient_from_values(const Vector& coef, const Vector& gram_coef, double weight,
                                Vector& out) const;

  /// scale * (sup|L''| * lambda_max(G_i) / n_i + lambda), G_i the Gram block
  /// of the agent's own inputs. Infinite when L'' is unbounded.
  double smoothness() const;

 private:
  void check() const;

  LocalData data_;
  LossSpec loss_;
  double lambda_;
  double scale_;
  CenterSetPtr centers_;
  std::vector<Eigen::Index> indices_;
};

/// J = sum_i J_i over a shared CenterSet.
class GlobalRisk {
 public:
  explicit GlobalRisk(std::vector<LocalRisk> locals);

  const std::vector<LocalRisk>& locals() const { return locals_; }
  const CenterSetPtr& centers() const { return locals_.front().centers(); }
  std::size_t agents() const { return locals_.size(); }

  double value(const Vector& coef) const;
  double value_from_values(const Vector& coef, const Vector& gram_coef) const;
  Vector gradient(const Vector& coef) const;
  Vector gradient_from_values(const Vector& coef, const Vector& gram_coef) const;

  /// Sum of scale_i * lambda_i: the strong-convexity modulus contributed by
  /// the regularizers.
  double regularization() const;
  bool convex() const;

 private:
  std::vector<LocalRisk> locals_;
};

double risk_value(const LocalRisk& risk, const RkhsFunction& f);
RkhsFunction frechet_gradient(const LocalRisk& risk, const RkhsFunction& f);
double global_value(const GlobalRisk& global, const RkhsFunction& f);
RkhsFunction global_gradient(const GlobalRisk& global, const RkhsFunction& f);

/// Relative error between the central difference of J_i along `direction`
/// with step h and <D J_i(f), direction>_H.
double directional_fd_check(const LocalRisk& risk, const RkhsFunction& f,
                            const RkhsFunction& direction, double h);

}  // namespace dfo
