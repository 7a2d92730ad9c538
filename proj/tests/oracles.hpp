#pragma once

// Reference implementations for the tests: straightforward, slow, and
// independent of the concatenation algebra they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hfvrp/model.hpp"
#include "hfvrp/rng.hpp"

namespace oracle {

using hfvrp::Instance;
using hfvrp::Rng;

struct RandomSpec {
  int customers = 8;
  int depots = 1;
  int types = 3;
  bool open = false;
  bool strict_backhaul = false;
  bool mixed_backhaul = false;
  bool site_dependency = false;
  bool split = false;
  bool time_windows = false;
  bool asymmetric = false;
  bool duration_limit = false;
  bool fixed_fleet = false;
};

inline double urand(Rng& rng, double lo, double hi) { return lo + (hi - lo) * hfvrp::uniform01(rng); }

inline Instance random_instance(const RandomSpec& spec, Rng& rng) {
  Instance inst;
  inst.name = "random";
  inst.attributes.open_routes = spec.open;
  inst.attributes.multi_depot = spec.depots > 1;
  inst.attributes.backhaul_strict = spec.strict_backhaul;
  inst.attributes.backhaul_mixed = spec.mixed_backhaul;
  inst.attributes.site_dependency = spec.site_dependency;
  inst.attributes.split_delivery = spec.split;
  inst.attributes.time_windows = spec.time_windows;
  inst.attributes.asymmetric = spec.asymmetric;
  inst.attributes.route_duration = spec.duration_limit;
  const double horizon = 1000.0;
  int id = 0;
  for (int d = 0; d < spec.depots; ++d) {
    hfvrp::Node n;
    n.id = id++;
    n.x = urand(rng, 0, 100);
    n.y = urand(rng, 0, 100);
    n.role = hfvrp::Role::depot;
    n.demand = 0;
    if (spec.time_windows) {
      n.ready = 0.0;
      n.due = horizon;
    }
    inst.nodes.push_back(n);
    inst.depots.push_back(n.id);
  }
  for (int c = 0; c < spec.customers; ++c) {
    hfvrp::Node n;
    n.id = id++;
    n.x = urand(rng, 0, 100);
    n.y = urand(rng, 0, 100);
    n.demand = hfvrp::uniform_int(rng, 1, 30);
    if ((spec.strict_backhaul || spec.mixed_backhaul) && hfvrp::uniform_int(rng, 0, 2) == 0)
      n.role = hfvrp::Role::backhaul;
    if (spec.time_windows) {
      const double a = urand(rng, 0, horizon * 0.7);
      n.ready = a;
      n.due = a + urand(rng, 5, 250);
      n.service = urand(rng, 0, 15);
    }
    inst.nodes.push_back(n);
    inst.customers.push_back(n.id);
  }
  for (int k = 0; k < spec.types; ++k) {
    hfvrp::VehicleType v;
    v.id = k;
    v.capacity = 40 + 30 * k + hfvrp::uniform_int(rng, 0, 10);
    v.fixed_cost = 20.0 + 25.0 * k;
    v.var_cost = 1.0 + 0.2 * k;
    v.count = spec.fixed_fleet ? hfvrp::uniform_int(rng, 2, 4) : hfvrp::kUnlimited;
    inst.fleet.push_back(v);
  }
  if (spec.site_dependency)
    for (int c : inst.customers) {
      std::uint64_t mask = 0;
      for (int k = 0; k < spec.types; ++k)
        if (hfvrp::uniform_int(rng, 0, 3) != 0) mask |= std::uint64_t{1} << k;
      if (mask == 0) mask = std::uint64_t{1} << (spec.types - 1);
      inst.nodes[c].allowed = mask;
    }
  if (spec.asymmetric) {
    const std::size_t n = inst.nodes.size();
    inst.matrix.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          inst.matrix[i * n + j] =
              std::hypot(inst.nodes[i].x - inst.nodes[j].x, inst.nodes[i].y - inst.nodes[j].y) *
              urand(rng, 1.0, 1.3);
  }
  if (spec.duration_limit) inst.duration_limit = 400.0;
  inst.finalize();
  return inst;
}

// Forward simulation of a depot-framed or open node sequence started at t0.
struct Timeline {
  double dist = 0.0;
  double end = 0.0;
  double warp = 0.0;
  double waiting = 0.0;
  double duration = 0.0;
  int delivery = 0;
  int pickup = 0;
  int peak = 0;
};

inline Timeline simulate(const Instance& inst, const std::vector<int>& nodes,
                         const std::vector<int>& qty, double t0) {
  Timeline tl;
  double t = t0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const hfvrp::Node& nd = inst.nodes[nodes[i]];
    if (i > 0) {
      const double arc = inst.d(nodes[i - 1], nodes[i]);
      tl.dist += arc;
      t += arc;
    }
    if (t < nd.ready) {
      tl.waiting += nd.ready - t;
      t = nd.ready;
    }
    if (t > nd.due) {
      tl.warp += t - nd.due;
      t = nd.due;
    }
    t += nd.service;
    if (nd.role == hfvrp::Role::backhaul) tl.pickup += qty[i];
    else tl.delivery += qty[i];
  }
  tl.end = t;
  tl.duration = (t - t0) + tl.warp;
  int load = tl.delivery;
  tl.peak = load;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const hfvrp::Node& nd = inst.nodes[nodes[i]];
    if (nd.role == hfvrp::Role::backhaul) load += qty[i];
    else load -= qty[i];
    tl.peak = std::max(tl.peak, load);
  }
  return tl;
}

inline bool close(double a, double b, double tol = 1e-9) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Checks a sequence statistic (dist, load, duration, earliest, latest, warp)
// against simulations from start times around its breakpoints: starting at
// t costs extra waiting max(0, E - t) and extra warp max(0, t - L).
inline std::string check_stat(const Instance& inst, const std::vector<int>& nodes,
                              const std::vector<int>& qty, const hfvrp::SeqStat& s,
                              Rng& rng) {
  std::vector<double> starts = {s.earliest, s.earliest - 1.0, s.earliest + 0.5};
  if (!std::isinf(s.latest)) {
    starts.push_back(s.latest);
    starts.push_back(s.latest + 2.0);
    starts.push_back(0.5 * (s.earliest + s.latest));
  }
  for (int i = 0; i < 4; ++i) starts.push_back(urand(rng, -100.0, 1400.0));
  for (double t : starts) {
    const Timeline tl = simulate(inst, nodes, qty, t);
    if (!close(tl.dist, s.dist)) return "dist";
    if (tl.delivery != s.delivery || tl.pickup != s.pickup || tl.peak != s.peak) return "load";
    const double want_warp = s.warp + (std::isinf(s.latest) ? 0.0 : std::max(0.0, t - s.latest));
    const double want_dur = s.duration + std::max(0.0, s.earliest - t);
    if (!close(tl.warp, want_warp, 1e-9)) return "warp";
    if (!close(tl.duration, want_dur, 1e-9)) return "duration";
  }
  // E is the latest start with no extra waiting, L the latest with no extra
  // warp: nudging past them must show up in the simulation.
  if (!std::isinf(s.latest)) {
    const Timeline late = simulate(inst, nodes, qty, s.latest + 1.0);
    if (!(late.warp > s.warp + 0.5)) return "latest";
  }
  const Timeline early = simulate(inst, nodes, qty, s.earliest - 1.0);
  if (!(early.duration > s.duration + 0.5)) return "earliest";
  return {};
}

// Minimum over permutations.
inline double brute_assignment(const std::vector<double>& m, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double best = hfvrp::kInf;
  do {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += m[static_cast<std::size_t>(i) * n + p[i]];
    best = std::min(best, c);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

struct EnumColumn {
  std::vector<int> rows;
  int type = 0;
  double cost = 0.0;
};

// Cheapest exact cover over all column subsets with at most limit[k] columns
// of type k (negative = unbounded) and exactly exact[k] when exact[k] >= 0.
inline double enumerate_cover(int rows, const std::vector<EnumColumn>& cols, const std::vector<int>& limit,
                              const std::vector<int>& exact = {}) {
  const std::size_t n = cols.size();
  double best = hfvrp::kInf;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> cover(rows, 0);
    std::vector<int> used(limit.size(), 0);
    double cost = 0.0;
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
      if (!((mask >> c) & 1u)) continue;
      cost += cols[c].cost;
      ++used[cols[c].type];
      for (int r : cols[c].rows)
        if (++cover[r] > 1) ok = false;
    }
    if (!ok) continue;
    if (std::any_of(cover.begin(), cover.end(), [](int x) { return x != 1; })) continue;
    for (std::size_t k = 0; k < limit.size(); ++k) {
      if (limit[k] >= 0 && used[k] > limit[k]) ok = false;
      if (!exact.empty() && exact[k] >= 0 && used[k] != exact[k]) ok = false;
    }
    if (ok) best = std::min(best, cost);
  }
  return best;
}

// Independent feasibility check of a solution: coverage, capacity from the
// load profile, backhaul order, fleet counts, duration and time windows by
// simulation from the earliest start.
struct CheckResult {
  bool feasible = true;
  double objective = 0.0;
  std::vector<std::string> problems;
};

inline CheckResult check_solution(const Instance& inst, const hfvrp::Solution& sol, double omega) {
  CheckResult out;
  std::map<int, int> served;
  std::vector<int> used(inst.num_types(), 0);
  for (const hfvrp::Route& r : sol.routes) {
    if (r.visits.empty()) continue;
    std::vector<int> nodes{r.depot}, qty{0};
    bool seen_backhaul = false;
    for (const hfvrp::Visit& v : r.visits) {
      nodes.push_back(v.customer);
      qty.push_back(v.quantity);
      served[v.customer] += v.quantity;
      const hfvrp::Node& nd = inst.nodes[v.customer];
      if (nd.role == hfvrp::Role::backhaul) seen_backhaul = true;
      else if (seen_backhaul && inst.attributes.backhaul_strict) out.problems.push_back("backhaul order");
      if (!((nd.allowed >> r.vehicle) & 1u)) out.problems.push_back("site dependency");
    }
    nodes.push_back(r.depot);
    qty.push_back(0);
    const Timeline tl = simulate(inst, nodes, qty, inst.nodes[r.depot].ready);
    const hfvrp::VehicleType& vt = inst.fleet[r.vehicle];
    if (tl.peak > vt.capacity) out.problems.push_back("capacity");
    if (inst.duration_limit) {
      const double len = inst.limit_on == hfvrp::LimitOn::distance ? tl.dist : tl.duration;
      if (len > *inst.duration_limit + 1e-9) out.problems.push_back("duration");
    }
    if (tl.warp > 1e-7) out.problems.push_back("time window");
    if (vt.extra) out.problems.push_back("extra vehicle");
    ++used[r.vehicle];
    out.objective += vt.fixed_cost + vt.var_cost * tl.dist + omega * tl.warp;
  }
  for (int c : inst.customers)
    if (served[c] != inst.nodes[c].demand) out.problems.push_back("coverage");
  for (int k = 0; k < inst.num_types(); ++k)
    if (!inst.fleet[k].unlimited() && used[k] > inst.fleet[k].count) out.problems.push_back("fleet");
  out.feasible = out.problems.empty();
  return out;
}

}  // namespace oracle
