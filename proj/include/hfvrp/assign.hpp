#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hfvrp/model.hpp"
#include "hfvrp/seqstat.hpp"

namespace hfvrp {

inline constexpr double kApSentinel = 1e9;

struct ApRoute {
  int load = 0;
  double dist = 0.0;
  std::uint64_t types = kAllTypes;
};

struct ApVehicle {
  int type = 0;
  int capacity = 0;
  double fixed = 0.0;
  double var = 0.0;
};

// Square cost matrix over routes (rows) and vehicle units (columns).
struct ApInstance {
  int routes = 0;
  int vehicles = 0;
  int size = 0;
  std::vector<double> cost;
  std::vector<int> unit_type;

  double at(int i, int j) const { return cost[static_cast<std::size_t>(i) * size + j]; }
};

struct ApResult {
  bool feasible = false;
  double cost = 0.0;
  std::vector<int> row_to_col;
};

ApInstance ap_build(const std::vector<ApRoute>& routes, const std::vector<ApVehicle>& vehicles);
ApResult hungarian(const std::vector<double>& matrix, int n);
ApResult hungarian(const ApInstance& ap);

// One unit per available vehicle; unlimited types contribute max_units each.
std::vector<ApVehicle> vehicle_units(const Instance& inst, int max_units);

struct RouteEval {
  SeqStat stat;
  int vehicle = 0;
  bool empty = false;
};

struct Reassignment {
  double delta = 0.0;
  std::vector<int> vehicles;
};

// Sequential reassignment of the touched routes (in order) to vehicles not
// assigned to any route; a route changes type only when strictly cheaper.
// `available[k]` counts free units of type k (kUnlimited for no bound).
std::optional<Reassignment> sfr(const Instance& inst, const std::vector<RouteEval>& touched,
                                std::vector<int> available, double omega);

struct CnsResult {
  bool feasible = false;
  double delta = 0.0;
  // New vehicle per route of `after` when feasible.
  std::vector<int> vehicles;
};

// Objective change of replacing `before` by `after` (same route indexing,
// routes listed in `touched` carry their post-move stats) when the vehicle
// assignment is re-optimized per `mode`.
CnsResult cns_cost(const Instance& inst, const std::vector<RouteEval>& before,
                   const std::vector<RouteEval>& after, const std::vector<int>& touched, CnsMode mode,
                   double omega);

}  // namespace hfvrp
