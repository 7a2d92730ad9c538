#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hfvrp/model.hpp"
#include "hfvrp/rng.hpp"
#include "hfvrp/setpart.hpp"

namespace hfvrp {

struct RestartTrace {
  int restart = 0;
  double initial = 0.0;
  double after_ils = 0.0;
  double after_sp = 0.0;
  long long iterations = 0;
  bool sp_called = false;
};

struct RunReport {
  std::string instance;
  std::string variant;
  std::uint64_t seed = 0;
  double best_objective = 0.0;
  double wall_seconds = 0.0;
  bool feasible = false;
  double tw_violation = 0.0;
  std::vector<int> fleet;
  std::vector<RestartTrace> restarts;
  long long ils_iterations = 0;
  long long moves = 0;
  int sp_solves = 0;
  long long sp_nodes = 0;
  std::size_t pool_size = 0;
  bool time_limited = false;

  // Everything except wall time, for reproducibility checks.
  std::string fingerprint() const;
};

struct IlsContext {
  const Instance& inst;
  const SolverParams& params;
  RoutePool& pool;
  // Best objective known outside the current restart (kInf if none).
  double f_global = kInf;
  std::optional<Clock::time_point> deadline;
  long long iterations = 0;
  long long moves = 0;
};

// Local search, then perturbation cycles until i_ils consecutive
// non-improving iterations.
Solution ils_rvnd(IlsContext& ctx, const Solution& s0, int i_ils, Rng& rng);

// n + 5v with v the fleet size (fixed fleets) or the route count of the
// initial solution (unlimited fleets).
int default_iils(const Instance& inst, const Solution& initial);

Solution local_search(const Instance& inst, const Solution& s, const SolverParams& params, Rng& rng,
                      long long* moves = nullptr);

struct HilsResult {
  Solution best;
  RunReport report;
};

HilsResult hils(const Instance& inst, const SolverParams& params);

}  // namespace hfvrp
