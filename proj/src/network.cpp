#include "dfo/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "dfo/error.hpp"

namespace dfo {

namespace {

// Reachability from node 0 along `adj` (adj[u] lists successors).
bool reaches_all(const std::vector<std::vector<int>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == adj.size();
}

bool strongly_connected(int m, const std::vector<std::vector<char>>& link) {
  std::vector<std::vector<int>> fwd(m), rev(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i != j && link[i][j]) {  // j -> i
        fwd[j].push_back(i);
        rev[i].push_back(j);
      }
    }
  }
  return reaches_all(fwd) && reaches_all(rev);
}

Matrix metropolis(int m, const std::vector<Edge>& edges) {
  std::vector<int> degree(m, 0);
  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= m || e.to < 0 || e.to >= m) throw Error("bad-edge");
    if (e.from == e.to || adj[e.from][e.to]) continue;
    adj[e.from][e.to] = adj[e.to][e.from] = 1;
    ++degree[e.from];
    ++degree[e.to];
  }
  Matrix p = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (adj[i][j]) p(i, j) = 1.0 / (1.0 + std::max(degree[i], degree[j]));
    }
  }
  for (int i = 0; i < m; ++i) p(i, i) = 1.0 - (p.row(i).sum());
  return p;
}

double min_positive_entry(const std::vector<Matrix>& cycle) {
  double z = 1.0;
  for (const auto& p : cycle) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.cols(); ++j) {
        if (i == j || p(i, j) > 0.0) z = std::min(z, p(i, j));
      }
    }
  }
  return z;
}

}  // namespace

double stochasticity_error(const Matrix& p) {
  const double rows = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (p.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

bool is_doubly_stochastic(const Matrix& p, double tol) {
  return p.rows() == p.cols() && p.rows() > 0 && (p.array() >= 0.0).all() &&
         stochasticity_error(p) <= tol;
}

MixingSchedule::MixingSchedule(ScheduleKind kind, int agents, int window, double zeta,
                               std::vector<Matrix> cycle, std::uint64_t seed)
    : kind_(kind), agents_(agents), window_(window), zeta_(zeta), cycle_(std::move(cycle)),
      seed_(seed) {
  if (cycle_.empty()) throw Error("empty-schedule");
  if (window_ < 1) throw Error("bad-window", "B must be at least 1");
  for (const auto& p : cycle_) {
    if (p.rows() != agents_ || p.cols() != agents_) throw Error("dim-mismatch", "mixing matrix shape");
  }
}

const Matrix& MixingSchedule::at(long t) const {
  if (t < 1) throw Error("bad-window", "schedule is indexed from t = 1");
  return cycle_[static_cast<std::size_t>((t - 1) % static_cast<long>(cycle_.size()))];
}

MixingSchedule ring_schedule(int m) {
  if (m < 2) throw Error("too-few-agents");
  Matrix p = Matrix::Zero(m, m);
  if (m == 2) {
    p.setConstant(0.5);
    return {ScheduleKind::kStaticRing, m, 1, 0.5, {p}};
  }
  const double w = 1.0 / 3.0;
  for (int i = 0; i < m; ++i) {
    p(i, i) = w;
    p(i, (i + 1) % m) = w;
    p(i, (i + m - 1) % m) = w;
  }
  return {ScheduleKind::kStaticRing, m, 1, w, {p}};
}

MixingSchedule periodic_edge_cycle(int m, const std::vector<std::vector<Edge>>& phases,
                                   int window, std::uint64_t seed) {
  if (m < 2) throw Error("too-few-agents");
  if (phases.empty()) throw Error("empty-schedule");
  std::vector<Matrix> cycle;
  cycle.reserve(phases.size());
  for (const auto& edges : phases) cycle.push_back(metropolis(m, edges));
  const double zeta = min_positive_entry(cycle);
  return {ScheduleKind::kPeriodicEdgeCycle, m, window, zeta, std::move(cycle), seed};
}

MixingSchedule matching_alternation(int m, int window) {
  if (m < 2 || m % 2 != 0) throw Error("too-few-agents", "matching alternation needs even m >= 2");
  std::vector<Edge> even, odd;
  for (int i = 0; i < m; i += 2) even.push_back({i, i + 1});
  for (int i = 1; i < m; i += 2) odd.push_back({i, (i + 1) % m});
  return periodic_edge_cycle(m, {even, odd}, window);
}

MixingSchedule random_edge_cycle(int m, int window, std::uint64_t seed) {
  if (m < 2) throw Error("too-few-agents");
  std::mt19937_64 rng(seed);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> ring;
  for (int k = 0; k < m; ++k) ring.push_back({order[k], order[(k + 1) % m]});
  std::shuffle(ring.begin(), ring.end(), rng);
  std::vector<std::vector<Edge>> phases(static_cast<std::size_t>(window));
  for (std::size_t k = 0; k < ring.size(); ++k) phases[k % phases.size()].push_back(ring[k]);
  return periodic_edge_cycle(m, phases, window, seed);
}

MixingSchedule custom_schedule(std::vector<Matrix> matrices, int window, double zeta) {
  if (matrices.empty()) throw Error("empty-schedule");
  const int m = static_cast<int>(matrices.front().rows());
  return {ScheduleKind::kCustomList, m, window, zeta, std::move(matrices)};
}

bool ValidationReport::has(const std::string& kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.kind == kind; });
}

ValidationReport validate_assumption1(const MixingSchedule& schedule, long horizon) {
  const int m = schedule.agents();
  const int b = schedule.window();
  if (horizon < b) throw Error("bad-horizon", "horizon must be at least B");
  constexpr double kTol = 1e-12;
  ValidationReport report;
  report.horizon = horizon;
  const double zeta = schedule.zeta();
  if (!(zeta > 0.0 && zeta < 1.0)) report.issues.push_back({"entry-floor", 0, -1, zeta});

  std::vector<std::vector<char>> link(m, std::vector<char>(m, 0));
  for (long t = 1; t <= horizon; ++t) {
    const Matrix& p = schedule.at(t);
    const double row = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double col = (p.colwise().sum().array() - 1.0).abs().maxCoeff();
    if (row > kTol) report.issues.push_back({"row-sum", t, -1, row});
    if (col > kTol) report.issues.push_back({"col-sum", t, -1, col});
    if (p.minCoeff() < 0.0) report.issues.push_back({"negative-entry", t, -1, p.minCoeff()});
    double floor_violation = 0.0;
    bool floor_bad = false;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double v = p(i, j);
        if ((i == j || v > 0.0) && v < zeta) {
          floor_bad = true;
          floor_violation = std::max(floor_violation, zeta - v);
        }
        if (i != j && v > 0.0) link[i][j] = 1;
      }
    }
    if (floor_bad && zeta > 0.0) report.issues.push_back({"entry-floor", t, -1, floor_violation});
    if (t % b == 0) {
      const long k = t / b - 1;
      if (!strongly_connected(m, link)) report.issues.push_back({"connectivity", t, k, 0.0});
      for (auto& row_links : link) std::fill(row_links.begin(), row_links.end(), 0);
    }
  }
  return report;
}

Matrix transition(const MixingSchedule& schedule, long t, long s) {
  if (s < 1 || t < s) throw Error("bad-window", "need t >= s >= 1");
  Matrix q = schedule.at(s);
  for (long tau = s + 1; tau <= t; ++tau) q = schedule.at(tau) * q;
  return q;
}

MixingBoundParams mixing_bound_params(int m, double zeta, int window) {
  const double base = 1.0 - zeta / (4.0 * m * m);
  return {1.0 / (base * base), std::pow(base, 1.0 / window)};
}

double mixing_bound(int m, double zeta, int window, long k) {
  const auto [omega, gamma] = mixing_bound_params(m, zeta, window);
  return omega * std::pow(gamma, static_cast<double>(k));
}

MixingBoundCheck check_mixing_bound(const MixingSchedule& schedule, long horizon) {
  const int m = schedule.agents();
  MixingBoundCheck out;
  for (long s = 1; s <= horizon; ++s) {
    Matrix q = schedule.at(s);
    for (long t = s;; ++t) {
      const double dev = (q.array() - 1.0 / m).abs().maxCoeff();
      const double bound = mixing_bound(m, schedule.zeta(), schedule.window(), t - s);
      ++out.pairs_checked;
      if (dev > bound) ++out.violations;
      out.worst_ratio = std::max(out.worst_ratio, dev / bound);
      out.max_stochasticity_error = std::max(out.max_stochasticity_error, stochasticity_error(q));
      if (t == horizon) break;
      q = schedule.at(t + 1) * q;
    }
  }
  return out;
}

MixingSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open " + path.string());
  long m = 0, count = 0;
  if (!(in >> m >> count) || m < 2 || count < 1) {
    throw Error("parse-error", path.string() + ": header must be \"m T\" with m >= 2, T >= 1");
  }
  std::vector<Matrix> mats;
  for (long t = 0; t < count; ++t) {
    Matrix p(m, m);
    for (long i = 0; i < m; ++i) {
      for (long j = 0; j < m; ++j) {
        if (!(in >> p(i, j))) {
          std::ostringstream msg;
          msg << path.string() << ": missing entry (" << i + 1 << "," << j + 1 << ") of block "
              << t + 1;
          throw Error("parse-error", msg.str());
        }
      }
    }
    mats.push_back(std::move(p));
  }
  const double zeta = min_positive_entry(mats);
  // Smallest window for which every alignment of the repeated list is
  // strongly connected; horizon b * T visits each alignment.
  for (long b = 1; b <= count; ++b) {
    auto candidate = custom_schedule(mats, static_cast<int>(b), zeta);
    auto report = validate_assumption1(candidate, b * count);
    if (report.passed()) return candidate;
    if (report.has("row-sum") || report.has("col-sum") || report.has("negative-entry") ||
        report.has("entry-floor")) {
      const auto& first = report.issues.front();
      throw Error("invalid-schedule", first.kind + " at t=" + std::to_string(first.t));
    }
  }
  throw Error("invalid-schedule", "connectivity: no window B <= T makes the union strongly connected");
}

void save_schedule(const std::vector<Matrix>& matrices, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("io-error", "cannot write " + path.string());
  out.precision(17);
  out << matrices.front().rows() << ' ' << matrices.size() << '\n';
  for (const auto& p : matrices) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.cols(); ++j) out << (j ? " " : "") << p(i, j);
      out << '\n';
    }
  }
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kStaticRing: return "static-ring";
    case ScheduleKind::kPeriodicEdgeCycle: return "periodic-edge-cycle";
    case ScheduleKind::kCustomList: return "custom-list";
  }
  return "unknown";
}

}  // namespace dfo
