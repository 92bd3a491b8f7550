#include <cmath>

#include <Eigen/Eigenvalues>

#include "dfo/datagen.hpp"
#include "dfo/objective.hpp"
#include "test_util.hpp"

namespace dfo {
namespace {

using test::random_int;
using test::random_vector;

const LossKind kAllKinds[] = {LossKind::kHalfSquared, LossKind::kSquared, LossKind::kWelsch,
                              LossKind::kCauchy, LossKind::kFair};

LocalData single(double x, double y) {
  LocalData d;
  d.inputs = RowMatrix::Constant(1, 1, x);
  d.outputs = Vector::Constant(1, y);
  return d;
}

CenterSetPtr line_centers(std::initializer_list<double> xs) {
  RowMatrix p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return CenterSet::make(GaussianKernel(0.33), p);
}

TEST(RiskValueTest, ZeroFunctionSingleDatum) {
  const auto c = line_centers({0.2});
  const LocalRisk r(single(0.2, 2.0), {}, 0.0, 1.0, c);
  EXPECT_EQ(risk_value(r, RkhsFunction(c)), 2.0);
}

TEST(RiskValueTest, ZeroLabelsGiveZero) {
  const auto c = line_centers({0.1, 0.5});
  for (auto kind : kAllKinds) {
    LocalData d;
    d.inputs = c->points();
    d.outputs = Vector::Zero(2);
    const LocalRisk r(d, {kind, 1.0}, 0.0, 0.5, c);
    EXPECT_EQ(risk_value(r, RkhsFunction(c)), 0.0);
  }
}

TEST(RiskValueTest, AtomWithRegularizer) {
  const auto c = line_centers({0.2, 0.9});
  const LocalRisk r(single(0.2, 0.0), {}, 1.0, 1.0, c);
  const auto f = atom(c, 0);
  // (f(x1) - 0)^2 / 2 + (1/2) |f|^2 = 0.5 + 0.5.
  EXPECT_DOUBLE_EQ(risk_value(r, f), 0.5 + 0.5 * rkhs_inner(f, f));
  EXPECT_DOUBLE_EQ(risk_value(r, f), 1.0);
}

TEST(RiskValueTest, ScaleMultipliesEverything) {
  const auto c = line_centers({0.2, 0.9});
  const LocalRisk a(single(0.9, 1.5), {LossKind::kCauchy, 1.0}, 0.3, 1.0, c);
  const LocalRisk b(single(0.9, 1.5), {LossKind::kCauchy, 1.0}, 0.3, 0.25, c);
  const RkhsFunction f(c, Vector::Map(std::array{0.4, -1.1}.data(), 2));
  EXPECT_DOUBLE_EQ(risk_value(b, f), 0.25 * risk_value(a, f));
}

TEST(FrechetGradientTest, ZeroFunctionHalfSquared) {
  const auto c = line_centers({0.0, 0.4, 0.8});
  LocalData d;
  d.inputs = RowMatrix(2, 1);
  d.inputs << 0.8, 0.0;
  d.outputs = Vector::Map(std::array{3.0, -1.0}.data(), 2);
  const LocalRisk r(d, {}, 0.0, 1.0, c);
  const Vector g = frechet_gradient(r, RkhsFunction(c)).coefficients();
  // -y_s / n_i at each own center.
  EXPECT_EQ(g, Vector::Map(std::array{0.5, 0.0, -1.5}.data(), 3));
}

TEST(FrechetGradientTest, ZeroResidualLeavesRegularizer) {
  const auto c = line_centers({0.0, 0.4});
  const RkhsFunction f(c, Vector::Map(std::array{0.7, -0.2}.data(), 2));
  const LocalRisk r(single(0.4, f(c->point(1))), {}, 0.3, 1.0, c);
  EXPECT_TRUE(frechet_gradient(r, f).coefficients().isApprox(0.3 * f.coefficients(), 1e-14));
}

TEST(FrechetGradientTest, WelschUnitResidual) {
  const auto c = line_centers({0.0});
  const LocalRisk r(single(0.0, -1.0), {LossKind::kWelsch, 1.0}, 0.0, 1.0, c);
  EXPECT_NEAR(frechet_gradient(r, RkhsFunction(c)).coefficients()[0], std::exp(-0.5), 1e-15);
}

TEST(LocalRiskTest, UnregisteredPointRejected) {
  const auto c = line_centers({0.0, 0.4});
  EXPECT_DFO_ERROR(LocalRisk(single(0.5, 1.0), {}, 0.0, 1.0, c), "center-not-registered");
  EXPECT_DFO_ERROR(LocalRisk(single(0.5, 1.0), {}, 0.0, 1.0, c, {7}), "center-not-registered");
  EXPECT_DFO_ERROR(LocalRisk(single(0.4, 1.0), {}, -1.0, 1.0, c), "bad-lambda");
}

TEST(GlobalRiskTest, IdenticalLocalsAdd) {
  const auto c = line_centers({0.1, 0.3});
  const LocalRisk r(single(0.3, 0.8), {LossKind::kFair, 0.5}, 0.2, 1.0, c);
  const GlobalRisk g({r, r, r, r});
  const RkhsFunction f(c, Vector::Map(std::array{0.2, 0.9}.data(), 2));
  EXPECT_NEAR(global_value(g, f), 4.0 * risk_value(r, f), 1e-14);
  EXPECT_TRUE(global_gradient(g, f).coefficients().isApprox(4.0 * frechet_gradient(r, f).coefficients()));
}

TEST(GlobalRiskTest, ExperimentAtZero) {
  const auto data = generate(6, 4, 3, 42);
  const auto problem = build_problem(data, 0.33, {}, 0.0, 1.0 / 6);
  const GlobalRisk g(problem.risks);
  double expected = 0.0;
  for (const auto& a : data.agents) expected += a.outputs.squaredNorm() / 2.0 / 4.0;
  expected /= 6.0;
  EXPECT_NEAR(global_value(g, RkhsFunction(problem.centers)), expected, 1e-14);
}

TEST(DirectionalCheckTest, ZeroDirection) {
  const auto c = line_centers({0.1, 0.3});
  const LocalRisk r(single(0.3, 0.8), {}, 0.0, 1.0, c);
  EXPECT_EQ(directional_fd_check(r, atom(c, 0), RkhsFunction(c), 1e-6), 0.0);
  EXPECT_DFO_ERROR(directional_fd_check(r, atom(c, 0), atom(c, 1), 0.0), "bad-step");
}

struct RandomProblem {
  CenterSetPtr centers;
  std::vector<LocalRisk> risks;
};

RandomProblem random_problem(Rng& rng, LossSpec loss, double lambda) {
  const int m = random_int(rng, 1, 5);
  const int n = random_int(rng, 1, 8);
  const int d = random_int(rng, 1, 5);
  const auto data = generate(m, n, d, rng.bits());
  const auto p = build_problem(data, rng.uniform(0.2, 1.5), loss, lambda, rng.uniform(0.1, 1.0));
  return {p.centers, p.risks};
}

// 100 random (f, direction) pairs per kind on random data.
TEST(ObjectiveProperties, GradientMatchesFiniteDifference) {
  Rng rng(21);
  for (auto kind : kAllKinds) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_problem(rng, {kind, rng.uniform(0.5, 2.0)}, rng.uniform() < 0.5 ? 0.0 : 0.1);
      const auto n = p.centers->size();
      const RkhsFunction f(p.centers, random_vector(rng, n));
      const RkhsFunction dir(p.centers, random_vector(rng, n));
      for (const auto& r : p.risks) {
        EXPECT_LE(directional_fd_check(r, f, dir, 1e-6), 1e-5) << to_string(kind);
      }
    }
  }
}

TEST(ObjectiveProperties, ConvexLossesSatisfyMidpointInequality) {
  Rng rng(22);
  for (auto kind : {LossKind::kHalfSquared, LossKind::kSquared, LossKind::kFair}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_problem(rng, {kind, 1.0}, 0.05);
      const auto n = p.centers->size();
      const Vector a = random_vector(rng, n), b = random_vector(rng, n);
      for (const auto& r : p.risks) {
        EXPECT_LE(r.value(0.5 * (a + b)), 0.5 * (r.value(a) + r.value(b)) + 1e-10);
      }
    }
  }
}

TEST(ObjectiveProperties, RobustGradientBoundedByDerivativeBound) {
  Rng rng(23);
  for (auto kind : {LossKind::kWelsch, LossKind::kCauchy, LossKind::kFair}) {
    for (int trial = 0; trial < 100; ++trial) {
      const LossSpec loss(kind, rng.uniform(0.5, 2.0));
      const auto p = random_problem(rng, loss, 0.0);
      const RkhsFunction f(p.centers, random_vector(rng, p.centers->size(), 3.0));
      for (const auto& r : p.risks) {
        const double bound = r.scale() * *smoothness_bounds(loss).derivative;
        EXPECT_LE(frechet_gradient(r, f).norm(), bound + 1e-10);
      }
    }
  }
}

TEST(ObjectiveProperties, GradientLipschitzWithEstimatedConstant) {
  Rng rng(24);
  for (auto kind : kAllKinds) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_problem(rng, {kind, rng.uniform(0.5, 2.0)}, rng.uniform(0.0, 0.2));
      const auto n = p.centers->size();
      const RkhsFunction f(p.centers, random_vector(rng, n)), g(p.centers, random_vector(rng, n));
      RkhsFunction diff(p.centers, f.coefficients() - g.coefficients());
      for (const auto& r : p.risks) {
        const RkhsFunction dg(p.centers, r.gradient(f.coefficients()) - r.gradient(g.coefficients()));
        EXPECT_LE(dg.norm(), r.smoothness() * diff.norm() * (1 + 1e-9) + 1e-12) << to_string(kind);
      }
    }
  }
}

TEST(ObjectiveProperties, FastPathsAgree) {
  Rng rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_problem(rng, {kAllKinds[trial % 5], 1.0}, 0.1);
    const Vector c = random_vector(rng, p.centers->size());
    const Vector u = p.centers->gram() * c;
    for (const auto& r : p.risks) {
      EXPECT_NEAR(r.value_from_values(c, u), r.value(c), 1e-12);
      Vector acc = Vector::Zero(c.size());
      r.add_gradient_from_values(c, u, 1.0, acc);
      EXPECT_TRUE(acc.isApprox(r.gradient(c), 1e-12));
    }
  }
}

}  // namespace
}  // namespace dfo
