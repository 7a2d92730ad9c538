#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfvrp/seqstat.hpp"

namespace hfvrp {

inline constexpr int kUnlimited = -1;
inline constexpr int kMaxTypes = 63;

enum class Role { depot, linehaul, backhaul };
enum class LimitOn { distance, duration };
enum class CnsMode { off, sfr, pda };

struct Node {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  int demand = 0;
  double ready = 0.0;
  double due = kInf;
  double service = 0.0;
  Role role = Role::linehaul;
  // Bit k set when vehicle type k may serve this node.
  std::uint64_t allowed = kAllTypes;

  bool operator==(const Node&) const = default;
};

struct VehicleType {
  int id = 0;
  int capacity = 0;
  double fixed_cost = 0.0;
  double var_cost = 1.0;
  int count = kUnlimited;
  bool extra = false;

  bool unlimited() const { return count == kUnlimited; }
  bool operator==(const VehicleType&) const = default;
};

struct AttributeSet {
  bool open_routes = false;
  bool multi_depot = false;
  bool backhaul_strict = false;
  bool backhaul_mixed = false;
  bool site_dependency = false;
  bool split_delivery = false;
  bool time_windows = false;
  bool route_duration = false;
  bool asymmetric = false;

  bool backhauls() const { return backhaul_strict || backhaul_mixed; }
  bool operator==(const AttributeSet&) const = default;
};

struct Instance {
  std::string name;
  std::vector<Node> nodes;
  std::vector<int> depots;
  std::vector<int> customers;
  // User vehicle types; finalize() may append the extra-vehicle type.
  std::vector<VehicleType> fleet;
  AttributeSet attributes;
  std::optional<double> duration_limit;
  LimitOn limit_on = LimitOn::duration;
  int depot_limit = kUnlimited;
  // Explicit row-major arc lengths; empty means Euclidean from coordinates.
  std::vector<double> matrix;

  // Derived by finalize().
  std::vector<double> dist;
  int user_types = 0;
  int total_demand = 0;
  double big_m = 0.0;
  double mean_arc = 0.0;

  int size() const { return static_cast<int>(nodes.size()); }
  int num_customers() const { return static_cast<int>(customers.size()); }
  int num_types() const { return static_cast<int>(fleet.size()); }
  double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * nodes.size() + j]; }
  bool is_depot(int i) const { return nodes[i].role == Role::depot; }
  bool has_extra() const { return user_types < num_types(); }
  int extra_type() const { return has_extra() ? user_types : -1; }
  bool fixed_fleet() const;
  int max_capacity() const;

  // Builds the distance matrix (zeroed return arcs for open routes, big-M
  // arcs for strict backhauls) and appends the extra vehicle when every
  // type has a finite count. Idempotent.
  void finalize();

  // Compares the source description, not derived data.
  bool same_source(const Instance& o) const;
};

struct Visit {
  int customer = 0;
  int quantity = 0;
  bool operator==(const Visit&) const = default;
};

struct Route {
  int depot = 0;
  int vehicle = 0;
  std::vector<Visit> visits;
  SeqStat stat;
  double cost = 0.0;

  bool empty() const { return visits.empty(); }
};

struct Solution {
  std::vector<Route> routes;
  std::vector<int> fleet_used;
  double objective = 0.0;
  double tw_violation = 0.0;
  bool feasible = true;
};

struct SolverParams {
  int ims = 30;
  std::optional<int> iils;
  double tmax = 30.0;
  double rgap = 0.02;
  int n_large = 150;
  double omega = 1000.0;
  std::uint64_t seed = 1;
  CnsMode cns = CnsMode::off;
  bool merge = true;
  bool sp = true;
  double pool_gap = 0.10;
  std::size_t pool_cap = 50000;
  // Optional wall-clock cap for a whole run, in seconds.
  std::optional<double> time_limit;
  // Optional node budget per SP solve; makes SP results machine-independent.
  std::optional<long long> sp_node_limit;

  void check() const;
};

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ViolationKind {
  uncovered,
  overcovered,
  duplicate_visit,
  capacity,
  backhaul_order,
  duration,
  fleet_count,
  depot_limit,
  site_dependency,
  extra_vehicle,
  objective_mismatch,
  time_window,
};

struct Violation {
  ViolationKind kind;
  int route = -1;
  int node = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> items;

  bool clean() const { return items.empty(); }
  bool has(ViolationKind k) const;
  bool hard_clean() const;
  std::string to_string() const;
};

const char* to_string(ViolationKind k);
bool is_hard(ViolationKind k);

ValidationReport validate_solution(const Instance& inst, const Solution& sol, double omega);
double recompute_objective(const Instance& inst, const Solution& sol, double omega);

// Recomputes every route stat and cost, the fleet counters and the objective.
void refresh(const Instance& inst, Solution& sol, double omega);
Route make_route(const Instance& inst, int depot, int vehicle, std::vector<Visit> visits,
                 double omega);
void drop_empty_routes(Solution& sol);

}  // namespace hfvrp
