#include "hfvrp/assign.hpp"

#include <algorithm>
#include <limits>

#include "hfvrp/eval.hpp"

namespace hfvrp {

ApInstance ap_build(const std::vector<ApRoute>& routes, const std::vector<ApVehicle>& vehicles) {
  ApInstance ap;
  ap.routes = static_cast<int>(routes.size());
  ap.vehicles = static_cast<int>(vehicles.size());
  ap.size = std::max(ap.routes, ap.vehicles);
  ap.cost.assign(static_cast<std::size_t>(ap.size) * ap.size, 0.0);
  ap.unit_type.assign(ap.size, -1);
  for (int j = 0; j < ap.vehicles; ++j) ap.unit_type[j] = vehicles[j].type;
  for (int i = 0; i < ap.routes; ++i) {
    const ApRoute& r = routes[i];
    for (int j = 0; j < ap.size; ++j) {
      double c = kApSentinel;
      if (j < ap.vehicles) {
        const ApVehicle& v = vehicles[j];
        const bool compatible = v.type < 64 && ((r.types >> v.type) & 1u);
        if (r.load <= v.capacity && compatible) c = v.fixed + v.var * r.dist;
      }
      ap.cost[static_cast<std::size_t>(i) * ap.size + j] = c;
    }
  }
  return ap;
}

ApResult hungarian(const std::vector<double>& a, int n) {
  ApResult res;
  res.row_to_col.assign(n, -1);
  if (n == 0) {
    res.feasible = true;
    return res;
  }
  // Shortest augmenting path with potentials; rows and columns 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  res.feasible = true;
  res.cost = 0.0;
  for (int j = 1; j <= n; ++j) res.row_to_col[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) {
    const double c = a[static_cast<std::size_t>(i) * n + res.row_to_col[i]];
    if (c >= kApSentinel) res.feasible = false;
    res.cost += c;
  }
  if (!res.feasible) res.cost = 0.0;
  return res;
}

ApResult hungarian(const ApInstance& ap) { return hungarian(ap.cost, ap.size); }

std::vector<ApVehicle> vehicle_units(const Instance& inst, int max_units) {
  std::vector<ApVehicle> units;
  for (const VehicleType& vt : inst.fleet) {
    const int n = vt.unlimited() ? max_units : std::min(vt.count, max_units);
    for (int u = 0; u < n; ++u) units.push_back(ApVehicle{vt.id, vt.capacity, vt.fixed_cost, vt.var_cost});
  }
  return units;
}

namespace {

double cost_on(const Instance& inst, const RouteEval& r, int k, double omega) {
  if (r.empty) return 0.0;
  if (!capacity_filter(r.stat, k, inst)) return kInf;
  return route_cost(r.stat, inst.fleet[k], omega);
}

double total(const Instance& inst, const std::vector<RouteEval>& rs, double omega) {
  double t = 0.0;
  for (const auto& r : rs) t += cost_on(inst, r, r.vehicle, omega);
  return t;
}

}  // namespace

std::optional<Reassignment> sfr(const Instance& inst, const std::vector<RouteEval>& touched,
                                std::vector<int> available, double omega) {
  Reassignment out;
  bool changed = false;
  for (const RouteEval& r : touched) {
    out.vehicles.push_back(r.vehicle);
    if (r.empty) continue;
    const double own = cost_on(inst, r, r.vehicle, omega);
    double best = own;
    int pick = -1;
    for (int k = 0; k < inst.num_types(); ++k) {
      if (k == r.vehicle || inst.fleet[k].extra || available[k] == 0) continue;
      const double c = cost_on(inst, r, k, omega);
      if (c < best) {
        best = c;
        pick = k;
      }
    }
    if (pick < 0) continue;
    if (available[pick] != kUnlimited) --available[pick];
    out.vehicles.back() = pick;
    out.delta += best == kInf ? 0.0 : best - (own == kInf ? best : own);
    changed = true;
  }
  if (!changed) return std::nullopt;
  return out;
}

CnsResult cns_cost(const Instance& inst, const std::vector<RouteEval>& before,
                   const std::vector<RouteEval>& after, const std::vector<int>& touched, CnsMode mode,
                   double omega) {
  CnsResult res;
  const double base = total(inst, before, omega);
  for (int t : touched) {
    const RouteEval& r = after[t];
    if (!r.empty && inst.duration_limit && limited_length(inst, r.stat) > *inst.duration_limit + 1e-9)
      return res;
  }
  res.vehicles.reserve(after.size());
  for (const auto& r : after) res.vehicles.push_back(r.vehicle);

  if (mode == CnsMode::pda) {
    std::vector<ApRoute> rows;
    std::vector<int> row_route;
    double warp_cost = 0.0;
    for (std::size_t i = 0; i < after.size(); ++i) {
      if (after[i].empty) continue;
      rows.push_back(ApRoute{after[i].stat.peak, after[i].stat.dist, after[i].stat.types});
      row_route.push_back(static_cast<int>(i));
      warp_cost += omega * after[i].stat.warp;
    }
    const auto units = vehicle_units(inst, static_cast<int>(rows.size()));
    const ApInstance ap = ap_build(rows, units);
    const ApResult ar = hungarian(ap);
    if (!ar.feasible) return res;
    double cost = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const int j = ar.row_to_col[r];
      res.vehicles[row_route[r]] = units[j].type;
      cost += ap.at(static_cast<int>(r), j);
    }
    res.feasible = true;
    res.delta = cost + warp_cost - base;
    return res;
  }

  double plain = total(inst, after, omega);
  if (mode == CnsMode::sfr) {
    std::vector<int> available(inst.num_types());
    for (int k = 0; k < inst.num_types(); ++k)
      available[k] = inst.fleet[k].unlimited() ? kUnlimited : inst.fleet[k].count;
    for (const auto& r : after)
      if (!r.empty && available[r.vehicle] != kUnlimited) --available[r.vehicle];
    for (int& a : available)
      if (a != kUnlimited) a = std::max(a, 0);
    std::vector<RouteEval> moved;
    for (int t : touched) moved.push_back(after[t]);
    if (auto re = sfr(inst, moved, available, omega)) {
      std::vector<RouteEval> next = after;
      for (std::size_t i = 0; i < touched.size(); ++i) {
        next[touched[i]].vehicle = re->vehicles[i];
        res.vehicles[touched[i]] = re->vehicles[i];
      }
      plain = total(inst, next, omega);
    }
  }
  if (plain == kInf) return res;
  res.feasible = true;
  res.delta = plain - base;
  return res;
}

}  // namespace hfvrp
