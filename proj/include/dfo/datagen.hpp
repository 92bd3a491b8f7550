#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "dfo/objective.hpp"

namespace dfo {

/// Seeded source of the uniform and normal draws used by the generator.
///
/// Uniform draws take the top 53 bits of one mt19937_64 output,
/// u = (bits >> 11) * 2^-53 in [0, 1). Standard normal draws use the
/// Box-Muller cosine branch on two uniforms, z = sqrt(-2 log(1 - u1)) cos(2 pi u2),
/// and discard the sine partner so every normal costs exactly two outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct OutlierRecord {
  int agent = 0;   // 0-based
  int sample = 0;  // 0-based
  double shift = 0.0;
};

/// Which agents receive the two outliers.
enum class OutlierPattern {
  kEveryAgent,        // i = 1..m (the displayed formula)
  kEverySecondAgent,  // i = 2, 4, ... (prose reading, for sensitivity checks)
};

/// Synthetic regression data of the experiments:
/// x uniform on [-1, 1]^d, y = <a, x> + eps with [a]_k = 1 for k < floor(d/2).
struct ExperimentData {
  int m = 0;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::vector<LocalData> agents;
  std::vector<Vector> clean_outputs;  // labels before outlier injection
  std::vector<OutlierRecord> outliers;

  bool is_outlier(int agent, int sample) const;
};

/// Draw order is agent-major, sample-minor: for each (i, s) the d input
/// coordinates, then the noise. Data for m agents is therefore a prefix of
/// the data for more agents with the same (n, d, seed).
ExperimentData generate(int m, int n, int d, std::uint64_t seed);

/// y_i1 += shift and y_i2 -= shift for the selected agents. Throws
/// "too-few-samples-for-outliers" when n < 2.
ExperimentData inject_outliers(ExperimentData data, double shift = 5.0,
                               OutlierPattern pattern = OutlierPattern::kEveryAgent);

/// Header "m n d seed", then rows "i s x_1 ... x_d y y_clean is_outlier"
/// with 1-based i and s.
void write_data(const ExperimentData& data, const std::filesystem::path& path);
ExperimentData read_data(const std::filesystem::path& path);

/// Centers (all mn inputs, agent-major) and one LocalRisk per agent.
struct KernelProblem {
  CenterSetPtr centers;
  std::vector<LocalRisk> risks;
};

KernelProblem build_problem(const ExperimentData& data, double bandwidth, const LossSpec& loss,
                            double lambda, double scale);

}  // namespace dfo
