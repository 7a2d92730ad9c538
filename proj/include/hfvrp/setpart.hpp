#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hfvrp/model.hpp"

namespace hfvrp {

using Clock = std::chrono::steady_clock;

struct Column {
  std::vector<Visit> visits;
  int vehicle = 0;
  int depot = 0;
  // Route cost without the time-warp term; only warp-free routes are pooled.
  double cost = 0.0;
  bool permanent = false;
  // Objective of the solution the route came from; drives eviction.
  double source_objective = 0.0;
};

class RoutePool {
 public:
  explicit RoutePool(std::size_t cap = 50000, double gap = 0.10) : cap_(cap), gap_(gap) {}

  // Returns true when the pool changed (new column or cheaper duplicate).
  bool add(const Instance& inst, const Route& route, bool permanent, double source_objective);
  // Adds the warp-free routes of `sol` when f(sol) <= (1 + gap) * f_best.
  void add_temporary_routes(const Instance& inst, const Solution& sol, double f_best);
  void add_permanent_routes(const Instance& inst, const Solution& sol);
  void remove_temporary();

  std::size_t size() const { return columns_.size(); }
  std::size_t permanent_count() const;
  std::size_t temporary_count() const { return size() - permanent_count(); }
  const std::vector<Column>& columns() const { return columns_; }
  double gap() const { return gap_; }

  // One column per line: cost, type, depot, customer list.
  void dump(std::ostream& out) const;

 private:
  void evict();
  void reindex();

  std::size_t cap_;
  double gap_;
  std::vector<Column> columns_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct SpColumn {
  std::vector<int> rows;
  std::vector<int> qty;
  int type = 0;
  int depot_slot = 0;
  double cost = 0.0;
  int source = -1;
};

// Cover rows are quantity-sum equalities (all quantities 1 without splits).
struct SpModel {
  int rows = 0;
  std::vector<int> demand;
  std::vector<SpColumn> columns;
  std::vector<int> type_limit;
  // Exact column count per type when the fleet is pinned, -1 otherwise.
  std::vector<int> type_exact;
  std::vector<int> depot_limit;

  bool coverable() const;
  bool pinned() const;
};

SpModel create_sp_model(const Instance& inst, const RoutePool& pool);

struct SpOptions {
  double cutoff = kInf;
  std::optional<Clock::time_point> deadline;
  std::optional<long long> node_limit;
  // Called on every new incumbent; returns the cutoff to continue with.
  std::function<double(const std::vector<int>& chosen, double cost)> on_incumbent;
};

struct SpResult {
  bool found = false;
  bool complete = false;
  double cost = kInf;
  std::vector<int> chosen;
  long long nodes = 0;
};

// Lagrangian bound over the cover rows with per-type count limits; `upper`
// steers the subgradient steps.
double sp_root_bound(const SpModel& model, double upper = kInf);
SpResult sp_branch_and_bound(const SpModel& model, const SpOptions& opt);

// Pins the per-type column counts to `fleet` when the root gap exceeds rgap.
bool fleet_fix(SpModel& model, const std::vector<int>& fleet, double f_best, double root_value,
               double rgap);

// `pool_columns` is the pool content the model was created from.
Solution columns_to_solution(const Instance& inst, const std::vector<Column>& pool_columns,
                             const SpModel& model, const std::vector<int>& chosen, double omega);

struct SpRun {
  Solution best;
  int solves = 0;
  long long nodes = 0;
  bool fleet_fixed = false;
};

// Improves s_best over the pool; `improve` polishes each new incumbent.
SpRun solve_sp(const Instance& inst, RoutePool& pool, const Solution& s_best,
               const SolverParams& params, const std::function<Solution(const Solution&)>& improve,
               std::optional<Clock::time_point> hard_deadline = std::nullopt);

}  // namespace hfvrp
