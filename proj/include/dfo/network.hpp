#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dfo/kernel.hpp"

namespace dfo {

/// Directed communication link: `from` sends to `to`, i.e. [P]_{to,from} > 0.
struct Edge {
  int from;
  int to;
};

enum class ScheduleKind { kStaticRing, kPeriodicEdgeCycle, kCustomList };

/// Maximum deviation of any row or column sum from 1.
double stochasticity_error(const Matrix& p);

bool is_doubly_stochastic(const Matrix& p, double tol = 1e-12);

/// Time-indexed sequence of m x m mixing matrices P_1, P_2, ...
///
/// The schedule stores one period of matrices and repeats it; P_t for
/// t >= 1 is `cycle[(t - 1) % period]`. `window` (B) and `zeta` are the
/// connectivity-window and entry-floor parameters the generator certifies;
/// validate_assumption1 checks them.
class MixingSchedule {
 public:
  MixingSchedule(ScheduleKind kind, int agents, int window, double zeta,
                 std::vector<Matrix> cycle, std::uint64_t seed = 0);

  ScheduleKind kind() const { return kind_; }
  int agents() const { return agents_; }
  int window() const { return window_; }
  double zeta() const { return zeta_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t period() const { return cycle_.size(); }
  const std::vector<Matrix>& cycle() const { return cycle_; }

  /// P_t, 1-based.
  const Matrix& at(long t) const;

 private:
  ScheduleKind kind_;
  int agents_;
  int window_;
  double zeta_;
  std::vector<Matrix> cycle_;
  std::uint64_t seed_;
};

/// Static ring: weight 1/3 on self and each ring neighbor (1/2 when m = 2).
/// B = 1 and zeta = 1/3 (1/2 for m = 2). Throws "too-few-agents" for m < 2.
MixingSchedule ring_schedule(int m);

/// Cycles through the given undirected edge sets with Metropolis weights
/// P_ij = 1 / (1 + max(deg_i, deg_j)), so each matrix is symmetric and
/// doubly stochastic. zeta is the smallest positive entry over the cycle.
MixingSchedule periodic_edge_cycle(int m, const std::vector<std::vector<Edge>>& phases,
                                   int window, std::uint64_t seed = 0);

/// Even m: alternates the perfect matchings {(0,1),(2,3),...} and
/// {(1,2),(3,4),...,(m-1,0)}. Their union is the m-cycle.
MixingSchedule matching_alternation(int m, int window);

/// Random Hamiltonian cycle whose edges are dealt round-robin to `window`
/// phases in shuffled order; the union over any aligned window is the cycle.
MixingSchedule random_edge_cycle(int m, int window, std::uint64_t seed);

/// Wraps user matrices without validation.
MixingSchedule custom_schedule(std::vector<Matrix> matrices, int window, double zeta);

struct ValidationIssue {
  std::string kind;  // "row-sum", "col-sum", "negative-entry", "entry-floor", "connectivity"
  long t = 0;        // iterate (1-based) or 0 for schedule-level issues
  long window = -1;  // window index k for connectivity issues
  double value = 0.0;
};

struct ValidationReport {
  long horizon = 0;
  std::vector<ValidationIssue> issues;

  bool passed() const { return issues.empty(); }
  bool has(const std::string& kind) const;
};

/// Checks double stochasticity, the entry floor and B-window strong
/// connectivity for t = 1..horizon. Requires horizon >= B ("bad-horizon").
ValidationReport validate_assumption1(const MixingSchedule& schedule, long horizon);

/// Q(t, s) = P_t P_{t-1} ... P_s. Throws "bad-window" unless t >= s >= 1.
Matrix transition(const MixingSchedule& schedule, long t, long s);

struct MixingBoundParams {
  double omega;
  double gamma;
};

/// omega = (1 - zeta/(4 m^2))^-2, gamma = (1 - zeta/(4 m^2))^(1/B).
MixingBoundParams mixing_bound_params(int m, double zeta, int window);

/// omega * gamma^k: bound on |[Q(t, s)]_ij - 1/m| for t - s = k.
double mixing_bound(int m, double zeta, int window, long k);

struct MixingBoundCheck {
  long pairs_checked = 0;
  long violations = 0;
  double worst_ratio = 0.0;    // max deviation / bound over all pairs
  double max_stochasticity_error = 0.0;
};

/// Compares every Q(t, s), 1 <= s <= t <= horizon, against mixing_bound.
MixingBoundCheck check_mixing_bound(const MixingSchedule& schedule, long horizon);

/// Plain-text schedule: "m T" then T blocks of m rows of m reals.
/// Loading validates; failures throw "invalid-schedule" with the first issue.
MixingSchedule load_schedule(const std::filesystem::path& path);
void save_schedule(const std::vector<Matrix>& matrices, const std::filesystem::path& path);

std::string_view to_string(ScheduleKind kind);

}  // namespace dfo
