#include "hfvrp/perturb.hpp"

#include <algorithm>

#include "hfvrp/eval.hpp"

namespace hfvrp {

namespace {

constexpr int kRetries = 50;

bool hard_ok(const Instance& inst, const SeqStat& s, int vehicle) {
  if (!capacity_filter(s, vehicle, inst)) return false;
  if (inst.attributes.backhaul_strict && s.dist >= inst.big_m) return false;
  return true;
}

SeqStat stat_of(const Instance& inst, int depot, const std::vector<Visit>& visits) {
  return route_stat(inst, depot, visits, false);
}

bool contains(const Route& r, int c) {
  return std::any_of(r.visits.begin(), r.visits.end(), [c](const Visit& v) { return v.customer == c; });
}

std::vector<int> free_units(const Instance& inst, const Solution& sol) {
  std::vector<int> avail(inst.num_types());
  for (int k = 0; k < inst.num_types(); ++k)
    avail[k] = inst.fleet[k].unlimited() ? kUnlimited : inst.fleet[k].count;
  for (const Route& r : sol.routes)
    if (!r.empty() && avail[r.vehicle] != kUnlimited) --avail[r.vehicle];
  return avail;
}

int cheapest_vehicle(const Instance& inst, const SeqStat& s, const std::vector<int>& avail) {
  int best = -1;
  double bc = kInf;
  for (int k = 0; k < inst.user_types; ++k) {
    if (avail[k] != kUnlimited && avail[k] <= 0) continue;
    if (!hard_ok(inst, s, k)) continue;
    const double c = route_cost(s, inst.fleet[k], 0.0);
    if (c < bc) {
      bc = c;
      best = k;
    }
  }
  return best;
}

int routes_at(const Solution& sol, int depot) {
  int n = 0;
  for (const Route& r : sol.routes)
    if (!r.empty() && r.depot == depot) ++n;
  return n;
}

bool swap11_once(const Instance& inst, Solution& s, Rng& rng) {
  const int R = static_cast<int>(s.routes.size());
  if (R < 2) return false;
  for (int t = 0; t < kRetries; ++t) {
    const int r1 = uniform_int(rng, 0, R - 1);
    int r2 = uniform_int(rng, 0, R - 2);
    if (r2 >= r1) ++r2;
    Route& a = s.routes[r1];
    Route& b = s.routes[r2];
    const int p = uniform_int(rng, 0, static_cast<int>(a.visits.size()) - 1);
    const int q = uniform_int(rng, 0, static_cast<int>(b.visits.size()) - 1);
    if (contains(b, a.visits[p].customer) || contains(a, b.visits[q].customer)) continue;
    std::vector<Visit> va = a.visits, vb = b.visits;
    std::swap(va[p], vb[q]);
    const SeqStat sa = stat_of(inst, a.depot, va), sb = stat_of(inst, b.depot, vb);
    if (!hard_ok(inst, sa, a.vehicle) || !hard_ok(inst, sb, b.vehicle)) continue;
    a.visits = std::move(va);
    b.visits = std::move(vb);
    return true;
  }
  return false;
}

bool shift11_once(const Instance& inst, Solution& s, Rng& rng) {
  const int R = static_cast<int>(s.routes.size());
  if (R < 2) return false;
  for (int t = 0; t < kRetries; ++t) {
    const int r1 = uniform_int(rng, 0, R - 1);
    int r2 = uniform_int(rng, 0, R - 2);
    if (r2 >= r1) ++r2;
    Route& a = s.routes[r1];
    Route& b = s.routes[r2];
    const int p = uniform_int(rng, 0, static_cast<int>(a.visits.size()) - 1);
    const int q = uniform_int(rng, 0, static_cast<int>(b.visits.size()) - 1);
    const Visit va_out = a.visits[p], vb_out = b.visits[q];
    if (contains(b, va_out.customer) || contains(a, vb_out.customer)) continue;
    std::vector<Visit> va = a.visits, vb = b.visits;
    va.erase(va.begin() + p);
    vb.erase(vb.begin() + q);
    va.insert(va.begin() + uniform_int(rng, 0, static_cast<int>(va.size())), vb_out);
    vb.insert(vb.begin() + uniform_int(rng, 0, static_cast<int>(vb.size())), va_out);
    const SeqStat sa = stat_of(inst, a.depot, va), sb = stat_of(inst, b.depot, vb);
    if (!hard_ok(inst, sa, a.vehicle) || !hard_ok(inst, sb, b.vehicle)) continue;
    a.visits = std::move(va);
    b.visits = std::move(vb);
    return true;
  }
  return false;
}

bool split_route(const Instance& inst, Solution& s, Rng& rng) {
  std::vector<int> cand;
  for (int i = 0; i < static_cast<int>(s.routes.size()); ++i)
    if (s.routes[i].visits.size() >= 2) cand.push_back(i);
  if (cand.empty()) return false;
  for (int t = 0; t < kRetries; ++t) {
    const int r = cand[uniform_int(rng, 0, static_cast<int>(cand.size()) - 1)];
    const Route& rt = s.routes[r];
    if (inst.depot_limit != kUnlimited && routes_at(s, rt.depot) + 1 > inst.depot_limit) return false;
    const int cut = uniform_int(rng, 1, static_cast<int>(rt.visits.size()) - 1);
    std::vector<Visit> v1(rt.visits.begin(), rt.visits.begin() + cut);
    std::vector<Visit> v2(rt.visits.begin() + cut, rt.visits.end());
    std::vector<int> avail = free_units(inst, s);
    if (avail[rt.vehicle] != kUnlimited) ++avail[rt.vehicle];
    const SeqStat s1 = stat_of(inst, rt.depot, v1), s2 = stat_of(inst, rt.depot, v2);
    const int k1 = cheapest_vehicle(inst, s1, avail);
    if (k1 < 0) continue;
    if (avail[k1] != kUnlimited) --avail[k1];
    const int k2 = cheapest_vehicle(inst, s2, avail);
    if (k2 < 0) continue;
    Route a{rt.depot, k1, std::move(v1), {}, 0.0};
    Route b{rt.depot, k2, std::move(v2), {}, 0.0};
    s.routes[r] = std::move(a);
    s.routes.push_back(std::move(b));
    return true;
  }
  return false;
}

bool k_split_once(const Instance& inst, Solution& s, Rng& rng) {
  const int R = static_cast<int>(s.routes.size());
  if (R < 2) return false;
  for (int t = 0; t < kRetries; ++t) {
    const int r = uniform_int(rng, 0, R - 1);
    const int p = uniform_int(rng, 0, static_cast<int>(s.routes[r].visits.size()) - 1);
    const Visit v = s.routes[r].visits[p];
    struct Target {
      double cost;
      int route;
      int pos;
    };
    std::vector<Target> targets;
    for (int o = 0; o < R; ++o) {
      const Route& rt = s.routes[o];
      if (o == r || contains(rt, v.customer)) continue;
      if (!((inst.nodes[v.customer].allowed >> rt.vehicle) & 1u)) continue;
      const int residual = inst.fleet[rt.vehicle].capacity - rt.stat.load();
      if (residual <= 0) continue;
      double bc = kInf;
      int bp = -1;
      for (int j = 0; j <= static_cast<int>(rt.visits.size()); ++j) {
        std::vector<Visit> vv = rt.visits;
        vv.insert(vv.begin() + j, Visit{v.customer, 1});
        const SeqStat st = stat_of(inst, rt.depot, vv);
        if (!hard_ok(inst, st, rt.vehicle)) continue;
        const double c = st.dist - rt.stat.dist;
        if (c < bc) {
          bc = c;
          bp = j;
        }
      }
      if (bp >= 0) targets.push_back({bc, o, bp});
    }
    std::stable_sort(targets.begin(), targets.end(),
                     [](const Target& a, const Target& b) { return a.cost < b.cost; });
    int remaining = v.quantity;
    std::vector<std::pair<Target, int>> plan;
    for (const Target& tg : targets) {
      if (remaining == 0) break;
      const Route& rt = s.routes[tg.route];
      const int take = std::min(remaining, inst.fleet[rt.vehicle].capacity - rt.stat.load());
      std::vector<Visit> vv = rt.visits;
      vv.insert(vv.begin() + tg.pos, Visit{v.customer, take});
      if (!hard_ok(inst, stat_of(inst, rt.depot, vv), rt.vehicle)) continue;
      plan.push_back({tg, take});
      remaining -= take;
    }
    if (remaining > 0 || plan.empty()) continue;
    for (const auto& [tg, take] : plan) {
      Route& rt = s.routes[tg.route];
      rt.visits.insert(rt.visits.begin() + tg.pos, Visit{v.customer, take});
    }
    s.routes[r].visits.erase(s.routes[r].visits.begin() + p);
    return true;
  }
  return false;
}

bool symmetric(const Instance& inst) { return !inst.attributes.asymmetric && !inst.attributes.time_windows; }

}  // namespace

const char* to_string(PerturbKind k) {
  switch (k) {
    case PerturbKind::multiple_swap11: return "Multiple-Swap(1,1)";
    case PerturbKind::multiple_shift11: return "Multiple-Shift(1,1)";
    case PerturbKind::split: return "Split";
    case PerturbKind::multiple_k_split: return "Multiple-k-Split";
    case PerturbKind::merge: return "Merge";
  }
  return "?";
}

std::vector<PerturbKind> admissible_perturbations(const Instance& inst, const SolverParams& params) {
  std::vector<PerturbKind> kinds{PerturbKind::multiple_swap11, PerturbKind::multiple_shift11,
                                 PerturbKind::split};
  if (inst.attributes.split_delivery) kinds.push_back(PerturbKind::multiple_k_split);
  bool hetero = false;
  for (int k = 1; k < inst.user_types; ++k)
    if (inst.fleet[k].capacity != inst.fleet[0].capacity) hetero = true;
  if (hetero && params.merge) kinds.push_back(PerturbKind::merge);
  return kinds;
}

std::optional<MergePair> merge_candidates(const Instance& inst, const Solution& sol, Rng& rng) {
  const int R = static_cast<int>(sol.routes.size());
  if (R < 2) return std::nullopt;
  const int qmax = inst.max_capacity();
  std::vector<int> donors;
  for (int i = 0; i < R; ++i)
    if (!sol.routes[i].empty() && inst.fleet[sol.routes[i].vehicle].capacity < qmax)
      donors.push_back(i);
  if (donors.empty()) return std::nullopt;
  const int donor = donors[uniform_int(rng, 0, static_cast<int>(donors.size()) - 1)];
  const Route& a = sol.routes[donor];
  const bool sym = symmetric(inst);
  std::vector<int> avail = free_units(inst, sol);
  if (avail[a.vehicle] != kUnlimited) ++avail[a.vehicle];
  std::optional<MergePair> best;
  double best_saving = -kInf;
  for (int j = 0; j < R; ++j) {
    const Route& b = sol.routes[j];
    if (j == donor || b.empty() || b.depot != a.depot) continue;
    std::vector<int> av = avail;
    if (av[b.vehicle] != kUnlimited) ++av[b.vehicle];
    bool dup = false;
    for (const Visit& v : a.visits)
      if (contains(b, v.customer)) dup = true;
    if (dup) continue;
    for (int donor_first = 0; donor_first < 2; ++donor_first) {
      for (int rev = 0; rev < (sym ? 2 : 1); ++rev) {
        std::vector<Visit> av_visits = a.visits;
        if (rev) std::reverse(av_visits.begin(), av_visits.end());
        const Visit& first_second = donor_first ? b.visits.front() : av_visits.front();
        const Visit& last_first = donor_first ? av_visits.back() : b.visits.back();
        const int depot = a.depot;
        const double saving = inst.d(last_first.customer, depot) + inst.d(depot, first_second.customer) -
                              inst.d(last_first.customer, first_second.customer);
        if (saving <= best_saving) continue;
        std::vector<Visit> merged = donor_first ? av_visits : b.visits;
        const auto& tail = donor_first ? b.visits : av_visits;
        merged.insert(merged.end(), tail.begin(), tail.end());
        const SeqStat st = stat_of(inst, depot, merged);
        const int k = cheapest_vehicle(inst, st, av);
        if (k < 0) continue;
        best_saving = saving;
        best = MergePair{donor, j, donor_first != 0, rev != 0, k};
      }
    }
  }
  return best;
}

Solution apply_perturbation(PerturbKind kind, const Instance& inst, const Solution& sol, Rng& rng,
                            const SolverParams& params, bool* changed) {
  Solution s = sol;
  drop_empty_routes(s);
  bool ok = false;
  switch (kind) {
    case PerturbKind::multiple_swap11:
    case PerturbKind::multiple_shift11:
    case PerturbKind::multiple_k_split: {
      const int times = uniform_int(rng, 1, 3);
      for (int t = 0; t < times; ++t) {
        bool step = false;
        if (kind == PerturbKind::multiple_swap11) step = swap11_once(inst, s, rng);
        if (kind == PerturbKind::multiple_shift11) step = shift11_once(inst, s, rng);
        if (kind == PerturbKind::multiple_k_split) step = k_split_once(inst, s, rng);
        if (step) {
          ok = true;
          refresh(inst, s, params.omega);
          drop_empty_routes(s);
        }
      }
      break;
    }
    case PerturbKind::split:
      ok = split_route(inst, s, rng);
      break;
    case PerturbKind::merge: {
      refresh(inst, s, params.omega);
      if (auto mp = merge_candidates(inst, s, rng)) {
        std::vector<Visit> dv = s.routes[mp->donor].visits;
        if (mp->reverse_donor) std::reverse(dv.begin(), dv.end());
        const std::vector<Visit>& rv = s.routes[mp->receiver].visits;
        std::vector<Visit> merged = mp->donor_first ? dv : rv;
        const auto& tail = mp->donor_first ? rv : dv;
        merged.insert(merged.end(), tail.begin(), tail.end());
        s.routes[mp->receiver].visits = std::move(merged);
        s.routes[mp->receiver].vehicle = mp->vehicle;
        s.routes.erase(s.routes.begin() + mp->donor);
        ok = true;
      }
      break;
    }
  }
  if (changed) *changed = ok;
  if (!ok) return sol;
  refresh(inst, s, params.omega);
  drop_empty_routes(s);
  return s;
}

Solution perturb(const Instance& inst, const Solution& sol, Rng& rng, const SolverParams& params,
                 std::optional<PerturbKind>* applied) {
  const auto kinds = admissible_perturbations(inst, params);
  const PerturbKind kind = kinds[uniform_int(rng, 0, static_cast<int>(kinds.size()) - 1)];
  bool changed = false;
  Solution out = apply_perturbation(kind, inst, sol, rng, params, &changed);
  if (applied) *applied = changed ? std::optional<PerturbKind>(kind) : std::nullopt;
  return out;
}

}  // namespace hfvrp
