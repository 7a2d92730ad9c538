#include "hfvrp/setpart.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>

#include "hfvrp/eval.hpp"

namespace hfvrp {

namespace {

constexpr double kWarpTol = 1e-7;
constexpr double kImprove = 1e-6;

std::string column_key(const std::vector<Visit>& visits, int vehicle, int depot) {
  std::vector<Visit> v = visits;
  std::sort(v.begin(), v.end(),
            [](const Visit& a, const Visit& b) { return a.customer < b.customer; });
  std::string key;
  key.reserve(8 * v.size() + 8);
  auto put = [&key](int x) { key.append(reinterpret_cast<const char*>(&x), sizeof x); };
  put(vehicle);
  put(depot);
  for (const Visit& x : v) {
    put(x.customer);
    put(x.quantity);
  }
  return key;
}

}  // namespace

bool RoutePool::add(const Instance& inst, const Route& route, bool permanent,
                    double source_objective) {
  if (route.empty() || route.stat.warp > kWarpTol) return false;
  if (inst.fleet[route.vehicle].extra) return false;
  const double cost = route_cost(route.stat, inst.fleet[route.vehicle], 0.0);
  std::string key = column_key(route.visits, route.vehicle, route.depot);
  auto it = index_.find(key);
  if (it != index_.end()) {
    Column& c = columns_[it->second];
    bool changed = false;
    if (cost < c.cost - 1e-12) {
      c.visits = route.visits;
      c.cost = cost;
      changed = true;
    }
    if (permanent && !c.permanent) {
      c.permanent = true;
      changed = true;
    }
    c.source_objective = std::min(c.source_objective, source_objective);
    return changed;
  }
  index_.emplace(std::move(key), columns_.size());
  columns_.push_back(Column{route.visits, route.vehicle, route.depot, cost, permanent, source_objective});
  if (columns_.size() > cap_) evict();
  return true;
}

void RoutePool::add_temporary_routes(const Instance& inst, const Solution& sol, double f_best) {
  if (f_best < kInf && sol.objective > (1.0 + gap_) * f_best) return;
  for (const Route& r : sol.routes) add(inst, r, false, sol.objective);
}

void RoutePool::add_permanent_routes(const Instance& inst, const Solution& sol) {
  for (const Route& r : sol.routes) add(inst, r, true, sol.objective);
}

void RoutePool::remove_temporary() {
  std::erase_if(columns_, [](const Column& c) { return !c.permanent; });
  reindex();
}

std::size_t RoutePool::permanent_count() const {
  return static_cast<std::size_t>(
      std::count_if(columns_.begin(), columns_.end(), [](const Column& c) { return c.permanent; }));
}

void RoutePool::evict() {
  std::vector<std::size_t> temps;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (!columns_[i].permanent) temps.push_back(i);
  if (temps.empty()) return;
  const std::size_t target = cap_ - cap_ / 10;
  const std::size_t excess = columns_.size() > target ? columns_.size() - target : 0;
  const std::size_t drop = std::min(excess, temps.size());
  std::nth_element(temps.begin(), temps.begin() + (drop - 1), temps.end(),
                   [this](std::size_t a, std::size_t b) {
                     if (columns_[a].source_objective != columns_[b].source_objective)
                       return columns_[a].source_objective > columns_[b].source_objective;
                     return a > b;
                   });
  std::vector<char> gone(columns_.size(), 0);
  for (std::size_t i = 0; i < drop; ++i) gone[temps[i]] = 1;
  std::size_t w = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (!gone[i]) columns_[w++] = std::move(columns_[i]);
  columns_.resize(w);
  reindex();
}

void RoutePool::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < columns_.size(); ++i)
    index_.emplace(column_key(columns_[i].visits, columns_[i].vehicle, columns_[i].depot), i);
}

void RoutePool::dump(std::ostream& out) const {
  for (const Column& c : columns_) {
    out << c.cost << ' ' << c.vehicle << ' ' << c.depot << ' ' << (c.permanent ? 'P' : 'T');
    for (const Visit& v : c.visits) out << ' ' << v.customer;
    out << '\n';
  }
}

bool SpModel::coverable() const {
  std::vector<int> avail(rows, 0);
  for (const SpColumn& c : columns)
    for (std::size_t i = 0; i < c.rows.size(); ++i) avail[c.rows[i]] += c.qty[i];
  for (int r = 0; r < rows; ++r)
    if (avail[r] < demand[r]) return false;
  return true;
}

bool SpModel::pinned() const {
  return std::any_of(type_exact.begin(), type_exact.end(), [](int x) { return x >= 0; });
}

SpModel create_sp_model(const Instance& inst, const RoutePool& pool) {
  SpModel m;
  m.rows = inst.num_customers();
  std::vector<int> row_of(inst.size(), -1);
  for (int r = 0; r < m.rows; ++r) {
    row_of[inst.customers[r]] = r;
    m.demand.push_back(inst.attributes.split_delivery ? inst.nodes[inst.customers[r]].demand : 1);
  }
  std::vector<int> slot_of(inst.size(), 0);
  for (std::size_t s = 0; s < inst.depots.size(); ++s) slot_of[inst.depots[s]] = static_cast<int>(s);
  for (const VehicleType& vt : inst.fleet) m.type_limit.push_back(vt.count);
  m.type_exact.assign(inst.num_types(), -1);
  m.depot_limit.assign(inst.depots.size(), inst.depot_limit);
  const auto& cols = pool.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    SpColumn c;
    for (const Visit& v : cols[i].visits) {
      c.rows.push_back(row_of[v.customer]);
      c.qty.push_back(inst.attributes.split_delivery ? v.quantity : 1);
    }
    c.type = cols[i].vehicle;
    c.depot_slot = slot_of[cols[i].depot];
    c.cost = cols[i].cost;
    c.source = static_cast<int>(i);
    m.columns.push_back(std::move(c));
  }
  return m;
}

namespace {

struct Duals {
  std::vector<double> u;
  std::vector<double> rc;
  // Bound with per-type count limits in the subproblem.
  double typed = -kInf;
  // Bound with an unrestricted subproblem.
  double free = -kInf;
};

int type_cap(const SpModel& m, std::size_t k) {
  int cap = m.type_limit[k];
  if (m.type_exact[k] >= 0) cap = cap == kUnlimited ? m.type_exact[k] : std::min(cap, m.type_exact[k]);
  return cap;
}

// Subgradient ascent on the covering rows.
Duals lagrangian(const SpModel& m, double upper) {
  const std::size_t nc = m.columns.size();
  const std::size_t nt = m.type_limit.size();
  Duals best;
  std::vector<double> u(m.rows, 0.0);
  {
    std::vector<double> share(m.rows, kInf);
    for (const SpColumn& c : m.columns) {
      const int units = std::accumulate(c.qty.begin(), c.qty.end(), 0);
      if (units == 0) continue;
      for (int r : c.rows) share[r] = std::min(share[r], c.cost / units);
    }
    for (int r = 0; r < m.rows; ++r) u[r] = share[r] == kInf ? 0.0 : share[r];
  }
  std::vector<double> rc(nc);
  std::vector<char> x(nc);
  std::vector<double> g(m.rows);
  std::vector<std::vector<std::pair<double, int>>> neg(nt);
  double lambda = 2.0;
  int stall = 0;
  const int max_iter = nc > 20000 ? 150 : 300;
  for (int it = 0; it < max_iter; ++it) {
    double base = 0.0;
    for (int r = 0; r < m.rows; ++r) base += m.demand[r] * u[r];
    double free = base;
    for (auto& v : neg) v.clear();
    for (std::size_t c = 0; c < nc; ++c) {
      const SpColumn& col = m.columns[c];
      double v = col.cost;
      for (std::size_t i = 0; i < col.rows.size(); ++i) v -= col.qty[i] * u[col.rows[i]];
      rc[c] = v;
      x[c] = 0;
      if (v < 0) {
        free += v;
        neg[col.type].emplace_back(v, static_cast<int>(c));
      }
    }
    double typed = base;
    for (std::size_t k = 0; k < nt; ++k) {
      auto& v = neg[k];
      const int cap = type_cap(m, k);
      if (cap != kUnlimited && static_cast<int>(v.size()) > cap) {
        std::nth_element(v.begin(), v.begin() + cap, v.end());
        v.resize(cap);
      }
      for (const auto& [val, c] : v) {
        typed += val;
        x[c] = 1;
      }
    }
    if (typed > best.typed + 1e-9) {
      best.typed = typed;
      best.free = free;
      best.u = u;
      best.rc = rc;
      stall = 0;
    } else if (++stall >= 15) {
      lambda *= 0.5;
      stall = 0;
    }
    if (lambda < 1e-3) break;
    std::fill(g.begin(), g.end(), 0.0);
    for (int r = 0; r < m.rows; ++r) g[r] = m.demand[r];
    for (std::size_t c = 0; c < nc; ++c) {
      if (!x[c]) continue;
      const SpColumn& col = m.columns[c];
      for (std::size_t i = 0; i < col.rows.size(); ++i) g[col.rows[i]] -= col.qty[i];
    }
    double norm = 0.0;
    for (double v : g) norm += v * v;
    if (norm == 0.0) break;
    const double target = upper < kInf ? upper : typed + 0.05 * std::abs(typed) + 1.0;
    if (target - typed <= 1e-9) break;
    const double step = lambda * (target - typed) / norm;
    for (int r = 0; r < m.rows; ++r) u[r] += step * g[r];
  }
  return best;
}

struct Search {
  const SpModel& m;
  const SpOptions& opt;
  Duals duals;
  // Columns per row, kept after reduced-cost fixing, by reduced cost.
  std::vector<std::vector<int>> by_row;
  std::vector<int> kill;
  std::vector<int> alive;
  std::vector<int> residual;
  std::vector<int> type_used;
  std::vector<int> depot_used;
  std::vector<int> chosen;
  // Negative reduced-cost columns per type, most negative first.
  std::vector<std::vector<int>> neg_by_type;
  double urest = 0.0;
  double cutoff;
  double root_bound = 0.0;
  SpResult res;
  bool stop = false;

  Search(const SpModel& model, const SpOptions& o) : m(model), opt(o), cutoff(o.cutoff) {
    duals = lagrangian(m, cutoff);
    root_bound = duals.typed;
    const std::size_t nc = m.columns.size();
    kill.assign(nc, 0);
    alive.assign(m.rows, 0);
    by_row.resize(m.rows);
    neg_by_type.resize(m.type_limit.size());
    for (std::size_t c = 0; c < nc; ++c) {
      const double rc = duals.rc[c];
      if (duals.typed + rc >= cutoff - kImprove) {
        kill[c] = 1;
        continue;
      }
      if (rc < 0) neg_by_type[m.columns[c].type].push_back(static_cast<int>(c));
      for (int r : m.columns[c].rows) {
        by_row[r].push_back(static_cast<int>(c));
        ++alive[r];
      }
    }
    auto by_rc = [this](int a, int b) { return duals.rc[a] < duals.rc[b]; };
    for (auto& list : by_row) std::stable_sort(list.begin(), list.end(), by_rc);
    for (auto& list : neg_by_type) std::stable_sort(list.begin(), list.end(), by_rc);
    residual = m.demand;
    for (int r = 0; r < m.rows; ++r) urest += residual[r] * duals.u[r];
    type_used.assign(m.type_limit.size(), 0);
    depot_used.assign(m.depot_limit.size(), 0);
  }

  bool fits(const SpColumn& c) const {
    const int lim = m.type_limit[c.type];
    if (lim != kUnlimited && type_used[c.type] >= lim) return false;
    if (m.type_exact[c.type] >= 0 && type_used[c.type] >= m.type_exact[c.type]) return false;
    const int dl = m.depot_limit[c.depot_slot];
    if (dl != kUnlimited && depot_used[c.depot_slot] >= dl) return false;
    for (std::size_t i = 0; i < c.rows.size(); ++i)
      if (c.qty[i] > residual[c.rows[i]]) return false;
    return true;
  }

  void kill_col(int c) {
    if (kill[c]++ == 0) {
      for (int r : m.columns[c].rows) --alive[r];
    }
  }

  void revive_col(int c) {
    if (--kill[c] == 0) {
      for (int r : m.columns[c].rows) ++alive[r];
    }
  }

  void take(int ci) {
    const SpColumn& c = m.columns[ci];
    ++type_used[c.type];
    ++depot_used[c.depot_slot];
    kill_col(ci);
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      const int r = c.rows[i];
      residual[r] -= c.qty[i];
      urest -= c.qty[i] * duals.u[r];
      if (residual[r] == 0)
        for (int c2 : by_row[r]) kill_col(c2);
    }
  }

  void untake(int ci) {
    const SpColumn& c = m.columns[ci];
    for (std::size_t i = c.rows.size(); i-- > 0;) {
      const int r = c.rows[i];
      if (residual[r] == 0)
        for (int c2 : by_row[r]) revive_col(c2);
      residual[r] += c.qty[i];
      urest += c.qty[i] * duals.u[r];
    }
    revive_col(ci);
    --type_used[c.type];
    --depot_used[c.depot_slot];
  }

  // Most negative reduced costs the remaining fleet could still add.
  double typed_rest() const {
    double t = 0.0;
    for (std::size_t k = 0; k < neg_by_type.size(); ++k) {
      const int cap = type_cap(m, k);
      int left = cap == kUnlimited ? std::numeric_limits<int>::max() : cap - type_used[k];
      for (int c : neg_by_type[k]) {
        if (left <= 0) break;
        if (kill[c]) continue;
        t += duals.rc[c];
        --left;
      }
    }
    return t;
  }

  bool out_of_budget() {
    ++res.nodes;
    if (opt.node_limit && res.nodes > *opt.node_limit) return true;
    if (opt.deadline && (res.nodes & 1023) == 0 && Clock::now() >= *opt.deadline) return true;
    return false;
  }

  void leaf(double cost) {
    for (std::size_t k = 0; k < m.type_exact.size(); ++k)
      if (m.type_exact[k] >= 0 && type_used[k] != m.type_exact[k]) return;
    res.found = true;
    res.cost = cost;
    res.chosen = chosen;
    cutoff = cost;
    if (opt.on_incumbent) {
      const double next = opt.on_incumbent(chosen, cost);
      cutoff = std::min(cutoff, next);
      if (next < root_bound - 1e-9) stop = true;
    }
  }

  // Branches on which column covers `row` next. A row with demand left
  // after a branch is branched again from position `start` so every column
  // subset is enumerated once.
  void dfs(int row, std::size_t start, double cost) {
    if (stop) return;
    if (out_of_budget()) {
      stop = true;
      return;
    }
    if (row < 0 || residual[row] == 0) {
      row = -1;
      start = 0;
      int fewest = 0;
      for (int r = 0; r < m.rows; ++r) {
        if (residual[r] == 0) continue;
        if (row < 0 || alive[r] < fewest) {
          row = r;
          fewest = alive[r];
        }
      }
      if (row < 0) {
        if (cost < cutoff - kImprove) leaf(cost);
        return;
      }
      if (fewest == 0) return;
    }
    const double base = cost + urest + typed_rest();
    if (base >= cutoff - kImprove) return;
    const auto& list = by_row[row];
    for (std::size_t p = start; p < list.size() && !stop; ++p) {
      const int ci = list[p];
      if (kill[ci]) continue;
      if (base + std::max(0.0, duals.rc[ci]) >= cutoff - kImprove) break;
      const SpColumn& c = m.columns[ci];
      if (!fits(c)) continue;
      take(ci);
      chosen.push_back(ci);
      dfs(row, p + 1, cost + c.cost);
      chosen.pop_back();
      untake(ci);
    }
  }
};

}  // namespace

double sp_root_bound(const SpModel& model, double upper) {
  if (model.columns.empty()) return 0.0;
  return lagrangian(model, upper).typed;
}

SpResult sp_branch_and_bound(const SpModel& model, const SpOptions& opt) {
  if (!model.coverable()) {
    SpResult none;
    none.complete = true;
    return none;
  }
  Search s(model, opt);
  s.dfs(-1, 0, 0.0);
  s.res.complete = !s.stop;
  if (!s.res.found) {
    s.res.cost = kInf;
    s.res.chosen.clear();
  }
  return s.res;
}

bool fleet_fix(SpModel& model, const std::vector<int>& fleet, double f_best, double root_value,
               double rgap) {
  if (!(f_best > 0.0) || f_best == kInf) return false;
  if ((f_best - root_value) / f_best <= rgap) return false;
  for (std::size_t k = 0; k < model.type_exact.size(); ++k)
    model.type_exact[k] = k < fleet.size() ? fleet[k] : 0;
  return true;
}

Solution columns_to_solution(const Instance& inst, const std::vector<Column>& pool_columns,
                             const SpModel& model, const std::vector<int>& chosen, double omega) {
  Solution sol;
  for (int c : chosen) {
    const Column& col = pool_columns[model.columns[c].source];
    sol.routes.push_back(make_route(inst, col.depot, col.vehicle, col.visits, omega));
  }
  refresh(inst, sol, omega);
  return sol;
}

SpRun solve_sp(const Instance& inst, RoutePool& pool, const Solution& s_best,
               const SolverParams& params, const std::function<Solution(const Solution&)>& improve,
               std::optional<Clock::time_point> hard_deadline) {
  SpRun run;
  run.best = s_best;
  pool.add_permanent_routes(inst, run.best);
  const bool fsm = std::all_of(inst.fleet.begin(), inst.fleet.begin() + inst.user_types,
                               [](const VehicleType& vt) { return vt.unlimited(); });
  bool improvement = true;
  while (improvement) {
    improvement = false;
    if (hard_deadline && Clock::now() >= *hard_deadline) break;
    SpModel model = create_sp_model(inst, pool);
    const std::vector<Column> snapshot = pool.columns();
    const double root = sp_root_bound(model, run.best.objective);
    if (fsm && fleet_fix(model, run.best.fleet_used, run.best.objective, root, params.rgap))
      run.fleet_fixed = true;
    Solution found = run.best;
    SpOptions opt;
    opt.cutoff = run.best.objective;
    opt.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(params.tmax));
    if (hard_deadline) opt.deadline = std::min(*opt.deadline, *hard_deadline);
    opt.node_limit = params.sp_node_limit;
    opt.on_incumbent = [&](const std::vector<int>& chosen, double) {
      Solution s = columns_to_solution(inst, snapshot, model, chosen, params.omega);
      if (s.objective < found.objective) found = s;
      if (improve) {
        Solution p = improve(s);
        if (p.objective < found.objective) found = p;
      }
      return found.objective;
    };
    const SpResult res = sp_branch_and_bound(model, opt);
    ++run.solves;
    run.nodes += res.nodes;
    if (found.objective < run.best.objective - kImprove) {
      run.best = found;
      pool.add_permanent_routes(inst, run.best);
      improvement = true;
    }
  }
  pool.remove_temporary();
  return run;
}

}  // namespace hfvrp
