#include <cmath>
#include <filesystem>
#include <fstream>

#include "dfo/network.hpp"
#include "test_util.hpp"

namespace dfo {
namespace {

TEST(RingScheduleTest, TwoAgents) {
  const auto s = ring_schedule(2);
  EXPECT_EQ(s.at(1), Matrix::Constant(2, 2, 0.5));
  EXPECT_EQ(s.zeta(), 0.5);
  EXPECT_EQ(s.window(), 1);
}

TEST(RingScheduleTest, ThreeAgentsIsComplete) {
  const auto s = ring_schedule(3);
  EXPECT_EQ(s.at(1), Matrix::Constant(3, 3, 1.0 / 3.0));
  EXPECT_EQ(s.zeta(), 1.0 / 3.0);
}

TEST(RingScheduleTest, FourAgentsCircularRows) {
  const Matrix p = ring_schedule(4).at(7);
  const double t = 1.0 / 3.0;
  Matrix expected(4, 4);
  expected << t, t, 0, t,
              t, t, t, 0,
              0, t, t, t,
              t, 0, t, t;
  EXPECT_EQ(p, expected);
}

TEST(RingScheduleTest, TooFewAgents) { EXPECT_DFO_ERROR(ring_schedule(1), "too-few-agents"); }

TEST(ValidateTest, RingPasses) {
  const auto r = validate_assumption1(ring_schedule(5), 10);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.horizon, 10);
}

TEST(ValidateTest, ScaledRowFailsRowSum) {
  std::vector<Matrix> ms(4, ring_schedule(5).at(1));
  ms[2].row(1) *= 0.9;
  const auto r = validate_assumption1(custom_schedule(ms, 1, 1.0 / 3.0), 4);
  ASSERT_TRUE(r.has("row-sum"));
  for (const auto& issue : r.issues) {
    if (issue.kind == "row-sum") EXPECT_EQ(issue.t, 3);
  }
}

TEST(ValidateTest, MatchingAlternationNeedsWindowTwo) {
  EXPECT_TRUE(validate_assumption1(matching_alternation(4, 2), 20).passed());
  const auto r = validate_assumption1(matching_alternation(4, 1), 20);
  EXPECT_TRUE(r.has("connectivity"));
  EXPECT_FALSE(r.has("row-sum"));
}

TEST(ValidateTest, ZeroFloorFails) {
  const auto ring = ring_schedule(4);
  const MixingSchedule s(ring.kind(), 4, 1, 0.0, ring.cycle());
  EXPECT_TRUE(validate_assumption1(s, 5).has("entry-floor"));
}

TEST(ValidateTest, EntryBelowFloorFails) {
  const auto ring = ring_schedule(4);
  const MixingSchedule s(ring.kind(), 4, 1, 0.4, ring.cycle());
  EXPECT_TRUE(validate_assumption1(s, 5).has("entry-floor"));
}

TEST(ValidateTest, NegativeEntryFails) {
  Matrix p(2, 2);
  p << 1.1, -0.1,
       -0.1, 1.1;
  const auto r = validate_assumption1(custom_schedule({p}, 1, 0.5), 1);
  EXPECT_TRUE(r.has("negative-entry"));
  EXPECT_FALSE(r.has("row-sum"));
}

TEST(ValidateTest, HorizonShorterThanWindow) {
  EXPECT_DFO_ERROR(validate_assumption1(matching_alternation(4, 2), 1), "bad-horizon");
}

TEST(TransitionTest, SingleFactor) {
  const auto s = matching_alternation(4, 2);
  EXPECT_EQ(transition(s, 3, 3), s.at(3));
}

TEST(TransitionTest, CompleteThreeRingIsIdempotent) {
  const auto q = transition(ring_schedule(3), 40, 2);
  EXPECT_EQ(q, Matrix::Constant(3, 3, 1.0 / 3.0));
}

TEST(TransitionTest, MatchingAlternationTwoSteps) {
  const auto s = matching_alternation(4, 2);
  Matrix p1(4, 4), p2(4, 4);
  // Metropolis weights on perfect matchings are 1/2.
  p1 << .5, .5, 0, 0,
        .5, .5, 0, 0,
        0, 0, .5, .5,
        0, 0, .5, .5;
  p2 << .5, 0, 0, .5,
        0, .5, .5, 0,
        0, .5, .5, 0,
        .5, 0, 0, .5;
  EXPECT_EQ(s.at(1), p1);
  EXPECT_EQ(s.at(2), p2);
  // Hand product P2 P1: every row is (1/4, 1/4, 1/4, 1/4).
  EXPECT_EQ(transition(s, 2, 1), Matrix::Constant(4, 4, 0.25));
  EXPECT_EQ(transition(s, 3, 2), p1 * p2);
}

TEST(TransitionTest, BadWindow) {
  EXPECT_DFO_ERROR(transition(ring_schedule(3), 2, 3), "bad-window");
  EXPECT_DFO_ERROR(transition(ring_schedule(3), 2, 0), "bad-window");
}

TEST(MixingBoundTest, Examples) {
  const double omega = std::pow(1.0 - 0.25 / 4.0 / 4.0, -2.0);  // m = 2, zeta = 1/4
  EXPECT_NEAR(mixing_bound(2, 0.25, 1, 0), omega, 1e-15);
  EXPECT_NEAR(mixing_bound(3, 1.0 / 3.0, 1, 0), std::pow(108.0 / 107.0, 2), 1e-14);
  EXPECT_NEAR(mixing_bound(3, 1.0 / 3.0, 1, 0), 1.018779, 1e-6);
  const double k108 = std::pow(108.0 / 107.0, 2) * std::pow(107.0 / 108.0, 108);
  EXPECT_NEAR(mixing_bound(3, 1.0 / 3.0, 1, 108), k108, 1e-13);
  EXPECT_GT(k108, 0.37);
  EXPECT_LT(k108, 0.38);
  const auto p = mixing_bound_params(5, 0.2, 3);
  EXPECT_NEAR(p.gamma, std::cbrt(1.0 - 0.2 / 100.0), 1e-15);
}

TEST(GeneratorsTest, MetropolisCycleIsSymmetricDoublyStochastic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int m = 3 + static_cast<int>(seed % 8);
    const auto s = random_edge_cycle(m, 1 + static_cast<int>(seed % 3), seed);
    for (const auto& p : s.cycle()) {
      EXPECT_TRUE(is_doubly_stochastic(p));
      EXPECT_EQ(p, p.transpose());
    }
    EXPECT_TRUE(validate_assumption1(s, 3L * s.window()).passed()) << "seed " << seed;
  }
}

// Every generated schedule (m <= 10, horizon <= 200) obeys the mixing
// bound at every (t, s), keeps Q(t, s) doubly stochastic, and static
// schedules approach 1/m monotonically.
TEST(NetworkProperties, MixingBoundAndStochasticity) {
  std::vector<MixingSchedule> schedules;
  for (int m = 2; m <= 10; ++m) schedules.push_back(ring_schedule(m));
  for (int m = 2; m <= 10; m += 2) schedules.push_back(matching_alternation(m, 2));
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    schedules.push_back(random_edge_cycle(3 + static_cast<int>(seed), static_cast<int>(seed % 3) + 1, seed));
  }
  for (const auto& s : schedules) {
    const auto check = check_mixing_bound(s, 200);
    EXPECT_EQ(check.violations, 0) << s.agents();
    EXPECT_EQ(check.pairs_checked, 200 * 201 / 2);
    EXPECT_LE(check.max_stochasticity_error, 1e-10);
    EXPECT_LE(check.worst_ratio, 1.0);
  }
  for (int m = 2; m <= 10; ++m) {
    const auto s = ring_schedule(m);
    double prev = 2.0;
    for (long t = 1; t <= 200; ++t) {
      const double dev = (transition(s, t, 1).array() - 1.0 / m).abs().maxCoeff();
      EXPECT_LE(dev, prev + 1e-15);
      prev = dev;
    }
  }
}

TEST(ScheduleFileTest, RoundTripAndValidation) {
  const auto dir = std::filesystem::temp_directory_path() / "dfo_network_test";
  std::filesystem::create_directories(dir);
  const auto ok = dir / "ok.txt";
  const auto s = matching_alternation(4, 2);
  save_schedule({s.at(1), s.at(2)}, ok);
  const auto loaded = load_schedule(ok);
  EXPECT_EQ(loaded.agents(), 4);
  EXPECT_EQ(loaded.at(1), s.at(1));
  EXPECT_EQ(loaded.at(4), s.at(2));
  EXPECT_EQ(loaded.window(), 2);
  EXPECT_EQ(loaded.zeta(), 0.5);

  Matrix bad = s.at(1);
  bad.row(0) *= 0.9;
  save_schedule({bad, s.at(2)}, dir / "bad.txt");
  EXPECT_DFO_ERROR(load_schedule(dir / "bad.txt"), "invalid-schedule");

  std::ofstream(dir / "garbage.txt") << "4 1\n1 2 x\n";
  EXPECT_DFO_ERROR(load_schedule(dir / "garbage.txt"), "parse-error");
  EXPECT_DFO_ERROR(load_schedule(dir / "missing.txt"), "io-error");
}

}  // namespace
}  // namespace dfo
