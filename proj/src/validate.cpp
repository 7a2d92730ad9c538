#include <cmath>
#include <map>
#include <sstream>

#include "hfvrp/eval.hpp"
#include "hfvrp/model.hpp"

namespace hfvrp {

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::uncovered: return "uncovered customer";
    case ViolationKind::overcovered: return "overcovered customer";
    case ViolationKind::duplicate_visit: return "duplicate visit";
    case ViolationKind::capacity: return "capacity";
    case ViolationKind::backhaul_order: return "backhaul order";
    case ViolationKind::duration: return "duration";
    case ViolationKind::fleet_count: return "fleet count";
    case ViolationKind::depot_limit: return "depot limit";
    case ViolationKind::site_dependency: return "site dependency";
    case ViolationKind::extra_vehicle: return "extra vehicle";
    case ViolationKind::objective_mismatch: return "objective mismatch";
    case ViolationKind::time_window: return "time window";
  }
  return "unknown";
}

bool is_hard(ViolationKind k) {
  return k != ViolationKind::time_window && k != ViolationKind::extra_vehicle;
}

bool ValidationReport::has(ViolationKind k) const {
  for (const auto& v : items)
    if (v.kind == k) return true;
  return false;
}

bool ValidationReport::hard_clean() const {
  for (const auto& v : items)
    if (is_hard(v.kind)) return false;
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : items) {
    os << hfvrp::to_string(v.kind);
    if (v.route >= 0) os << " route=" << v.route;
    if (v.node >= 0) os << " node=" << v.node;
    if (!v.message.empty()) os << " " << v.message;
    os << '\n';
  }
  return os.str();
}

namespace {

void check_structure(const Instance& inst, const Solution& sol) {
  for (std::size_t r = 0; r < sol.routes.size(); ++r) {
    const Route& rt = sol.routes[r];
    if (rt.depot < 0 || rt.depot >= inst.size() || !inst.is_depot(rt.depot))
      throw StructuralError("route " + std::to_string(r) + ": unknown depot " +
                            std::to_string(rt.depot));
    if (rt.vehicle < 0 || rt.vehicle >= inst.num_types())
      throw StructuralError("route " + std::to_string(r) + ": unknown vehicle type " +
                            std::to_string(rt.vehicle));
    for (const Visit& v : rt.visits) {
      if (v.customer < 0 || v.customer >= inst.size() || inst.is_depot(v.customer))
        throw StructuralError("route " + std::to_string(r) + ": unknown customer " +
                              std::to_string(v.customer));
      if (v.quantity <= 0)
        throw StructuralError("route " + std::to_string(r) + ": non-positive quantity");
    }
  }
}

}  // namespace

double recompute_objective(const Instance& inst, const Solution& sol, double omega) {
  double total = 0.0;
  for (const Route& rt : sol.routes) {
    if (rt.empty()) continue;
    const SeqStat s = route_stat(inst, rt.depot, rt.visits, false);
    total += route_cost(s, inst.fleet[rt.vehicle], omega);
  }
  return total;
}

ValidationReport validate_solution(const Instance& inst, const Solution& sol, double omega) {
  check_structure(inst, sol);
  ValidationReport rep;
  auto add = [&](ViolationKind k, int r, int node, std::string msg = {}) {
    rep.items.push_back(Violation{k, r, node, std::move(msg)});
  };

  std::vector<int> served(inst.size(), 0);
  std::vector<int> visits(inst.size(), 0);
  std::vector<int> used(inst.num_types(), 0);
  std::map<int, int> per_depot;
  for (std::size_t r = 0; r < sol.routes.size(); ++r) {
    const Route& rt = sol.routes[r];
    if (rt.empty()) continue;
    const int ri = static_cast<int>(r);
    ++used[rt.vehicle];
    ++per_depot[rt.depot];
    std::map<int, int> seen;
    bool after_backhaul = false;
    bool any_linehaul = false;
    for (const Visit& v : rt.visits) {
      served[v.customer] += v.quantity;
      ++visits[v.customer];
      if (++seen[v.customer] > 1) add(ViolationKind::duplicate_visit, ri, v.customer);
      const Role role = inst.nodes[v.customer].role;
      if (role == Role::backhaul) after_backhaul = true;
      if (role == Role::linehaul) {
        any_linehaul = true;
        if (inst.attributes.backhaul_strict && after_backhaul)
          add(ViolationKind::backhaul_order, ri, v.customer);
      }
      if (!((inst.nodes[v.customer].allowed >> rt.vehicle) & 1u))
        add(ViolationKind::site_dependency, ri, v.customer);
    }
    if (inst.attributes.backhaul_strict && after_backhaul && !any_linehaul)
      add(ViolationKind::backhaul_order, ri, -1, "route without linehaul customers");
    const SeqStat s = route_stat(inst, rt.depot, rt.visits, false);
    const VehicleType& vt = inst.fleet[rt.vehicle];
    if (s.peak > vt.capacity)
      add(ViolationKind::capacity, ri, -1,
          "load " + std::to_string(s.peak) + " > " + std::to_string(vt.capacity));
    if (inst.duration_limit && limited_length(inst, s) > *inst.duration_limit + 1e-9)
      add(ViolationKind::duration, ri, -1);
    if (s.warp > 1e-7) add(ViolationKind::time_window, ri, -1);
    if (vt.extra) add(ViolationKind::extra_vehicle, ri, -1);
  }

  for (int c : inst.customers) {
    const int q = inst.nodes[c].demand;
    if (!inst.attributes.split_delivery && visits[c] > 1)
      add(ViolationKind::duplicate_visit, -1, c);
    if (served[c] < q || (visits[c] == 0 && q == 0))
      add(ViolationKind::uncovered, -1, c);
    else if (served[c] > q)
      add(ViolationKind::overcovered, -1, c);
  }
  for (int k = 0; k < inst.num_types(); ++k) {
    const VehicleType& vt = inst.fleet[k];
    if (!vt.unlimited() && used[k] > vt.count)
      add(ViolationKind::fleet_count, -1, -1,
          "type " + std::to_string(k) + " uses " + std::to_string(used[k]));
  }
  if (inst.depot_limit != kUnlimited)
    for (const auto& [dpt, cnt] : per_depot)
      if (cnt > inst.depot_limit) add(ViolationKind::depot_limit, -1, dpt);

  const double obj = recompute_objective(inst, sol, omega);
  if (std::abs(obj - sol.objective) > 1e-9 * std::max(1.0, std::abs(obj)))
    add(ViolationKind::objective_mismatch, -1, -1);
  return rep;
}

Route make_route(const Instance& inst, int depot, int vehicle, std::vector<Visit> visits,
                 double omega) {
  Route r;
  r.depot = depot;
  r.vehicle = vehicle;
  r.visits = std::move(visits);
  r.stat = route_stat(inst, depot, r.visits, false);
  r.cost = r.empty() ? 0.0 : route_cost(r.stat, inst.fleet[vehicle], omega);
  return r;
}

void refresh(const Instance& inst, Solution& sol, double omega) {
  sol.fleet_used.assign(inst.num_types(), 0);
  sol.objective = 0.0;
  sol.tw_violation = 0.0;
  bool extra = false;
  for (Route& r : sol.routes) {
    r.stat = route_stat(inst, r.depot, r.visits, false);
    r.cost = r.empty() ? 0.0 : route_cost(r.stat, inst.fleet[r.vehicle], omega);
    if (r.empty()) continue;
    ++sol.fleet_used[r.vehicle];
    sol.objective += r.cost;
    sol.tw_violation += r.stat.warp;
    extra |= inst.fleet[r.vehicle].extra;
  }
  sol.feasible = sol.tw_violation <= 1e-7 && !extra;
}

void drop_empty_routes(Solution& sol) {
  std::erase_if(sol.routes, [](const Route& r) { return r.empty(); });
}

}  // namespace hfvrp
