#include <cmath>

#include "dfo/loss.hpp"
#include "test_util.hpp"

namespace dfo {
namespace {

const LossKind kAllKinds[] = {LossKind::kHalfSquared, LossKind::kSquared, LossKind::kWelsch,
                              LossKind::kCauchy, LossKind::kFair};
const LossKind kRobustKinds[] = {LossKind::kWelsch, LossKind::kCauchy, LossKind::kFair};

TEST(LossTest, ZeroResidualIsZero) {
  for (auto kind : kAllKinds) {
    for (double sigma : {0.5, 1.0, 3.0}) {
      EXPECT_EQ(loss_value({kind, sigma}, 0.0), 0.0) << to_string(kind);
      EXPECT_EQ(loss_derivative({kind, sigma}, 0.0), 0.0) << to_string(kind);
    }
  }
}

TEST(LossTest, PublishedForms) {
  EXPECT_EQ(loss_value({LossKind::kSquared}, 2.0), 4.0);
  EXPECT_EQ(loss_value({LossKind::kHalfSquared}, 2.0), 2.0);
  EXPECT_NEAR(loss_value({LossKind::kCauchy, 1.0}, std::sqrt(2.0)), std::log(2.0), 1e-15);
  EXPECT_NEAR(loss_value({LossKind::kCauchy, 1.0}, std::sqrt(2.0)), 0.6931472, 1e-7);
  // sigma^2 (1 - exp(-u^2 / 2 sigma^2)) at sigma = 2, u = 2.
  EXPECT_NEAR(loss_value({LossKind::kWelsch, 2.0}, 2.0), 4.0 * (1.0 - std::exp(-0.5)), 1e-15);
  // sigma^2 (|u|/sigma - log(1 + |u|/sigma)) at sigma = 2, u = -2.
  EXPECT_NEAR(loss_value({LossKind::kFair, 2.0}, -2.0), 4.0 * (1.0 - std::log(2.0)), 1e-15);
}

TEST(LossTest, DerivativeExamples) {
  EXPECT_EQ(loss_derivative({LossKind::kHalfSquared}, 3.0), 3.0);
  EXPECT_EQ(loss_derivative({LossKind::kSquared}, 3.0), 6.0);
  EXPECT_NEAR(loss_derivative({LossKind::kWelsch, 1.0}, 1.0), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(loss_derivative({LossKind::kWelsch, 1.0}, 1.0), 0.6065307, 1e-7);
  EXPECT_NEAR(loss_derivative({LossKind::kCauchy, 1.0}, 2.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(loss_derivative({LossKind::kFair, 1.0}, -1.0), -0.5, 1e-15);
}

TEST(LossTest, ParseAndValidate) {
  for (auto kind : kAllKinds) EXPECT_EQ(parse_loss_kind(to_string(kind)), kind);
  EXPECT_DFO_ERROR(parse_loss_kind("huber"), "unknown-loss");
  EXPECT_DFO_ERROR(LossSpec(LossKind::kWelsch, 0.0), "bad-sigma");
  EXPECT_DFO_ERROR(LossSpec(LossKind::kFair, -1.0), "bad-sigma");
  EXPECT_FALSE(LossSpec(LossKind::kWelsch).convex());
  EXPECT_FALSE(LossSpec(LossKind::kCauchy).convex());
  EXPECT_TRUE(LossSpec(LossKind::kFair).convex());
  EXPECT_TRUE(LossSpec(LossKind::kHalfSquared).convex());
}

TEST(SmoothnessBoundsTest, Examples) {
  const auto half = smoothness_bounds({LossKind::kHalfSquared});
  EXPECT_EQ(half.second_derivative, 1.0);
  EXPECT_FALSE(half.derivative.has_value());
  EXPECT_EQ(smoothness_bounds({LossKind::kSquared}).second_derivative, 2.0);
  EXPECT_NEAR(*smoothness_bounds({LossKind::kFair, 1.0}).derivative, 1.0, 1e-15);
  EXPECT_LE(*smoothness_bounds({LossKind::kCauchy, 1.0}).derivative, 1.0 / std::sqrt(2.0) + 1e-15);
  EXPECT_NEAR(*smoothness_bounds({LossKind::kWelsch, 2.0}).derivative, 2.0 * std::exp(-0.5), 1e-15);
  for (auto kind : kRobustKinds) EXPECT_EQ(smoothness_bounds({kind, 1.7}).second_derivative, 1.0);
}

// Grid search over |u| <= 100 sigma: the stated bounds hold, and the
// derivative bound is attained to grid resolution.
TEST(SmoothnessBoundsTest, BoundsHoldOnGrid) {
  for (auto kind : kRobustKinds) {
    for (double sigma : {0.3, 1.0, 4.0}) {
      const LossSpec spec(kind, sigma);
      const auto b = smoothness_bounds(spec);
      double max_d = 0.0, max_dd = 0.0;
      const double step = 1e-3 * sigma, h = 1e-5 * sigma;
      for (double u = -100 * sigma; u <= 100 * sigma; u += step) {
        max_d = std::max(max_d, std::abs(loss_derivative(spec, u)));
        const double dd = (loss_derivative(spec, u + h) - loss_derivative(spec, u - h)) / (2 * h);
        max_dd = std::max(max_dd, std::abs(dd));
      }
      EXPECT_LE(max_d, *b.derivative + 1e-12) << to_string(kind);
      EXPECT_GE(max_d, 0.98 * *b.derivative) << to_string(kind);
      EXPECT_LE(max_dd, *b.second_derivative + 1e-6) << to_string(kind);
    }
  }
}

TEST(LossProperties, DerivativeMatchesFiniteDifference) {
  Rng rng(3);
  for (auto kind : kAllKinds) {
    for (double sigma : {1.0, 2.5}) {
      const LossSpec spec(kind, sigma);
      for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform(-50.0, 50.0);
        const double h = 1e-6;
        const double fd = (loss_value(spec, u + h) - loss_value(spec, u - h)) / (2 * h);
        const double an = loss_derivative(spec, u);
        const double err = std::abs(fd - an);
        EXPECT_TRUE(err <= 1e-6 * std::abs(an) || err <= 1e-9)
            << to_string(kind) << " u=" << u << " fd=" << fd << " an=" << an;
      }
    }
  }
}

TEST(LossProperties, EvenAndOdd) {
  Rng rng(5);
  for (auto kind : kAllKinds) {
    const LossSpec spec(kind, 1.3);
    for (int i = 0; i < 500; ++i) {
      const double u = rng.uniform(-100.0, 100.0);
      EXPECT_EQ(loss_value(spec, u), loss_value(spec, -u));
      EXPECT_EQ(loss_derivative(spec, -u), -loss_derivative(spec, u));
      EXPECT_GE(loss_value(spec, u), 0.0);
    }
  }
}

TEST(LossProperties, RobustDerivativeWithinBound) {
  Rng rng(9);
  for (auto kind : kRobustKinds) {
    const LossSpec spec(kind, 0.8);
    const double bound = *smoothness_bounds(spec).derivative;
    for (int i = 0; i < 2000; ++i) {
      EXPECT_LE(std::abs(loss_derivative(spec, rng.uniform(-80.0, 80.0))), bound);
    }
  }
}

}  // namespace
}  // namespace dfo
