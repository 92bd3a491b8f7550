#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "dfo/datagen.hpp"
#include "test_util.hpp"

namespace dfo {
namespace {

// Independent replay of the documented draw recipe on a raw engine.
struct Replay {
  std::mt19937_64 engine;
  explicit Replay(std::uint64_t seed) : engine(seed) {}
  double uniform() { return std::ldexp(static_cast<double>(engine() >> 11), -53); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

TEST(GenerateTest, ReplaysDrawOrderTwoDims) {
  const auto data = generate(2, 3, 2, 42);
  Replay r(42);
  for (int i = 0; i < 2; ++i) {
    for (int s = 0; s < 3; ++s) {
      const double x1 = -1.0 + 2.0 * r.uniform();
      const double x2 = -1.0 + 2.0 * r.uniform();
      const double eps = r.normal();
      const auto& a = data.agents[static_cast<std::size_t>(i)];
      EXPECT_EQ(a.inputs(s, 0), x1);
      EXPECT_EQ(a.inputs(s, 1), x2);
      EXPECT_EQ(a.outputs[s], x1 + eps);  // a = (1, 0)
    }
  }
}

TEST(GenerateTest, OneDimHasNoSignal) {
  const auto data = generate(1, 4, 1, 7);
  Replay r(7);
  for (int s = 0; s < 4; ++s) {
    EXPECT_EQ(data.agents[0].inputs(s, 0), -1.0 + 2.0 * r.uniform());
    EXPECT_EQ(data.agents[0].outputs[s], r.normal());
  }
}

TEST(GenerateTest, RejectsBadSizes) {
  EXPECT_DFO_ERROR(generate(0, 1, 1, 0), "bad-size");
  EXPECT_DFO_ERROR(generate(1, 0, 1, 0), "bad-size");
  EXPECT_DFO_ERROR(generate(1, 1, 0, 0), "bad-size");
}

TEST(GenerateTest, Deterministic) {
  const auto dir = std::filesystem::temp_directory_path() / "dfo_datagen_test";
  std::filesystem::create_directories(dir);
  write_data(generate(3, 4, 5, 11), dir / "a.txt");
  write_data(generate(3, 4, 5, 11), dir / "b.txt");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(dir / "a.txt"), slurp(dir / "b.txt"));
  write_data(generate(3, 4, 5, 12), dir / "c.txt");
  EXPECT_NE(slurp(dir / "a.txt"), slurp(dir / "c.txt"));
}

TEST(GenerateTest, FewerAgentsArePrefix) {
  const auto small = generate(30, 10, 10, 42);
  const auto large = generate(50, 10, 10, 42);
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(small.agents[static_cast<std::size_t>(i)].inputs,
              large.agents[static_cast<std::size_t>(i)].inputs);
    EXPECT_EQ(small.agents[static_cast<std::size_t>(i)].outputs,
              large.agents[static_cast<std::size_t>(i)].outputs);
  }
}

TEST(OutlierTest, EveryAgent) {
  const auto clean = generate(3, 4, 2, 5);
  const auto data = inject_outliers(clean, 5.0);
  EXPECT_EQ(data.outliers.size(), 6u);
  for (int i = 0; i < 3; ++i) {
    const auto& y = data.agents[static_cast<std::size_t>(i)].outputs;
    const auto& y0 = clean.agents[static_cast<std::size_t>(i)].outputs;
    EXPECT_EQ(y[0], y0[0] + 5.0);
    EXPECT_EQ(y[1], y0[1] - 5.0);
    EXPECT_EQ(y.tail(2), y0.tail(2));
    EXPECT_TRUE(data.is_outlier(i, 0));
    EXPECT_TRUE(data.is_outlier(i, 1));
    EXPECT_FALSE(data.is_outlier(i, 2));
    EXPECT_EQ(data.clean_outputs[static_cast<std::size_t>(i)], y0);
  }
}

TEST(OutlierTest, EverySecondAgent) {
  const auto clean = generate(4, 2, 1, 5);
  const auto data = inject_outliers(clean, 2.0, OutlierPattern::kEverySecondAgent);
  EXPECT_EQ(data.outliers.size(), 4u);
  EXPECT_EQ(data.agents[0].outputs, clean.agents[0].outputs);
  EXPECT_EQ(data.agents[1].outputs[0], clean.agents[1].outputs[0] + 2.0);
  EXPECT_EQ(data.agents[2].outputs, clean.agents[2].outputs);
  EXPECT_EQ(data.agents[3].outputs[1], clean.agents[3].outputs[1] - 2.0);
}

TEST(OutlierTest, NeedsTwoSamples) {
  EXPECT_DFO_ERROR(inject_outliers(generate(2, 1, 1, 0)), "too-few-samples-for-outliers");
}

TEST(RngTest, MomentsOfDraws) {
  Rng rng(2024);
  const int count = 100000;
  double su = 0, suu = 0, sz = 0, szz = 0;
  for (int k = 0; k < count; ++k) {
    const double u = rng.uniform(-1.0, 1.0);
    const double z = rng.normal();
    su += u, suu += u * u, sz += z, szz += z * z;
  }
  const double mu = su / count, mz = sz / count;
  // Five standard errors.
  EXPECT_NEAR(mu, 0.0, 5.0 * std::sqrt(1.0 / 3.0 / count));
  EXPECT_NEAR(suu / count - mu * mu, 1.0 / 3.0, 0.01);
  EXPECT_NEAR(mz, 0.0, 5.0 / std::sqrt(double(count)));
  EXPECT_NEAR(szz / count - mz * mz, 1.0, 0.02);
}

TEST(DataFileTest, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "dfo_datagen_test";
  std::filesystem::create_directories(dir);
  const auto data = inject_outliers(generate(3, 4, 3, 99), 5.0, OutlierPattern::kEverySecondAgent);
  write_data(data, dir / "rt.txt");
  const auto back = read_data(dir / "rt.txt");
  EXPECT_EQ(back.m, 3);
  EXPECT_EQ(back.seed, 99u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(back.agents[static_cast<std::size_t>(i)].inputs, data.agents[static_cast<std::size_t>(i)].inputs);
    EXPECT_EQ(back.agents[static_cast<std::size_t>(i)].outputs, data.agents[static_cast<std::size_t>(i)].outputs);
    EXPECT_EQ(back.clean_outputs[static_cast<std::size_t>(i)], data.clean_outputs[static_cast<std::size_t>(i)]);
    for (int s = 0; s < 4; ++s) EXPECT_EQ(back.is_outlier(i, s), data.is_outlier(i, s));
  }
  std::ofstream(dir / "short.txt") << "2 2 1 0\n1 1 0.5 1 1 0\n";
  EXPECT_DFO_ERROR(read_data(dir / "short.txt"), "parse-error");
  EXPECT_DFO_ERROR(read_data(dir / "nope.txt"), "io-error");
}

TEST(BuildProblemTest, CentersAreAgentMajor) {
  const auto data = generate(3, 2, 2, 1);
  const auto p = build_problem(data, 0.33, {}, 0.0, 1.0 / 3);
  EXPECT_EQ(p.centers->size(), 6);
  EXPECT_EQ(p.risks.size(), 3u);
  EXPECT_EQ(p.centers->points().row(3), data.agents[1].inputs.row(1));
  EXPECT_EQ(p.risks[2].indices(), (std::vector<Eigen::Index>{4, 5}));
}

}  // namespace
}  // namespace dfo
