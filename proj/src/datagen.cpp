#include "dfo/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dfo/error.hpp"

namespace dfo {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool ExperimentData::is_outlier(int agent, int sample) const {
  for (const auto& o : outliers) {
    if (o.agent == agent && o.sample == sample) return true;
  }
  return false;
}

ExperimentData generate(int m, int n, int d, std::uint64_t seed) {
  if (m < 1 || n < 1 || d < 1) throw Error("bad-size", "m, n and d must be at least 1");
  ExperimentData data;
  data.m = m;
  data.n = n;
  data.d = d;
  data.seed = seed;
  const int active = d / 2;
  Rng rng(seed);
  for (int i = 0; i < m; ++i) {
    LocalData local;
    local.agent = i;
    local.inputs.resize(n, d);
    local.outputs.resize(n);
    for (int s = 0; s < n; ++s) {
      double mean = 0.0;
      for (int k = 0; k < d; ++k) {
        local.inputs(s, k) = rng.uniform(-1.0, 1.0);
        if (k < active) mean += local.inputs(s, k);
      }
      local.outputs[s] = mean + rng.normal();
    }
    data.clean_outputs.push_back(local.outputs);
    data.agents.push_back(std::move(local));
  }
  return data;
}

ExperimentData inject_outliers(ExperimentData data, double shift, OutlierPattern pattern) {
  if (data.n < 2) throw Error("too-few-samples-for-outliers", "need n >= 2");
  for (int i = 0; i < data.m; ++i) {
    if (pattern == OutlierPattern::kEverySecondAgent && i % 2 == 0) continue;
    auto& y = data.agents[static_cast<std::size_t>(i)].outputs;
    y[0] += shift;
    y[1] -= shift;
    data.outliers.push_back({i, 0, shift});
    data.outliers.push_back({i, 1, -shift});
  }
  return data;
}

void write_data(const ExperimentData& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("io-error", "cannot write " + path.string());
  out << data.m << ' ' << data.n << ' ' << data.d << ' ' << data.seed << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ' ' << buf;
  };
  for (int i = 0; i < data.m; ++i) {
    const auto& local = data.agents[static_cast<std::size_t>(i)];
    for (int s = 0; s < data.n; ++s) {
      out << i + 1 << ' ' << s + 1;
      for (int k = 0; k < data.d; ++k) put(local.inputs(s, k));
      put(local.outputs[s]);
      put(data.clean_outputs[static_cast<std::size_t>(i)][s]);
      out << ' ' << (data.is_outlier(i, s) ? 1 : 0) << '\n';
    }
  }
  if (!out) throw Error("io-error", "write failed for " + path.string());
}

ExperimentData read_data(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path.string());
  ExperimentData data;
  if (!(in >> data.m >> data.n >> data.d >> data.seed) || data.m < 1 || data.n < 1 ||
      data.d < 1) {
    throw Error("parse-error", path.string() + ": bad header");
  }
  data.agents.resize(static_cast<std::size_t>(data.m));
  data.clean_outputs.assign(static_cast<std::size_t>(data.m), Vector(data.n));
  for (int i = 0; i < data.m; ++i) {
    auto& local = data.agents[static_cast<std::size_t>(i)];
    local.agent = i;
    local.inputs.resize(data.n, data.d);
    local.outputs.resize(data.n);
  }
  const long rows = static_cast<long>(data.m) * data.n;
  for (long r = 0; r < rows; ++r) {
    int i = 0, s = 0, flag = 0;
    if (!(in >> i >> s) || i < 1 || i > data.m || s < 1 || s > data.n) {
      throw Error("parse-error", path.string() + ": bad row " + std::to_string(r + 2));
    }
    auto& local = data.agents[static_cast<std::size_t>(i - 1)];
    for (int k = 0; k < data.d; ++k) in >> local.inputs(s - 1, k);
    in >> local.outputs[s - 1] >> data.clean_outputs[static_cast<std::size_t>(i - 1)][s - 1] >>
        flag;
    if (!in) throw Error("parse-error", path.string() + ": bad row " + std::to_string(r + 2));
    if (flag) {
      data.outliers.push_back({i - 1, s - 1,
                               local.outputs[s - 1] -
                                   data.clean_outputs[static_cast<std::size_t>(i - 1)][s - 1]});
    }
  }
  return data;
}

KernelProblem build_problem(const ExperimentData& data, double bandwidth, const LossSpec& loss,
                            double lambda, double scale) {
  const Eigen::Index total = static_cast<Eigen::Index>(data.m) * data.n;
  RowMatrix points(total, data.d);
  for (int i = 0; i < data.m; ++i) {
    points.middleRows(static_cast<Eigen::Index>(i) * data.n, data.n) =
        data.agents[static_cast<std::size_t>(i)].inputs;
  }
  KernelProblem problem;
  problem.centers = CenterSet::make(GaussianKernel(bandwidth), std::move(points));
  for (int i = 0; i < data.m; ++i) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(data.n));
    for (int s = 0; s < data.n; ++s) idx[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(i) * data.n + s;
    problem.risks.emplace_back(data.agents[static_cast<std::size_t>(i)], loss, lambda, scale,
                               problem.centers, std::move(idx));
  }
  return problem;
}

}  // namespace dfo
