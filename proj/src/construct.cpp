#include "hfvrp/construct.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "hfvrp/eval.hpp"

namespace hfvrp {

double insertion_cost(InsertionKind kind, const Instance& inst, const Route& partial, int customer,
                      int position, int vehicle, int anchor) {
  const Node& c = inst.nodes[customer];
  if (!((c.allowed >> vehicle) & 1u)) return kInf;
  if (kind == InsertionKind::nearest) return inst.d(anchor, customer);
  const int n = static_cast<int>(partial.visits.size());
  const int i = position == 0 ? partial.depot : partial.visits[position - 1].customer;
  const int j = position == n ? partial.depot : partial.visits[position].customer;
  double cost = inst.d(i, customer) + inst.d(customer, j) - inst.d(i, j);
  cost -= kPromotion * inst.d(partial.depot, customer);
  if (inst.attributes.site_dependency) {
    const std::uint64_t user_mask =
        inst.user_types >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << inst.user_types) - 1);
    const int compat = std::popcount(c.allowed & user_mask);
    if (compat > 0) cost -= inst.mean_arc / compat;
  }
  return cost;
}

namespace {

struct Building {
  int depot = 0;
  int vehicle = 0;
  std::vector<int> nodes;
  std::vector<SeqStat> fwd, bwd;
  int anchor_pos = 0;

  int size() const { return static_cast<int>(nodes.size()) - 2; }
};

class Builder {
 public:
  Builder(const Instance& inst, Rng& rng, InsertionKind kind)
      : inst_(inst), rng_(rng), kind_(kind) {}

  Solution run();

 private:
  struct Best {
    double cost = kInf;
    int pos = -1;
  };

  void rebuild(Building& b) const;
  Route as_route(const Building& b) const;
  bool feasible(const Building& b, int c, int j) const;
  Best best_for(const Building& b, int c) const;
  int nearest_depot(int c) const;
  bool has_unit(int k) const;
  void open_route(int vehicle, int seed);
  int pick_seed(int vehicle);
  bool seed_ok(int vehicle, int c) const;

  const Instance& inst_;
  Rng& rng_;
  InsertionKind kind_;
  std::vector<Building> routes_;
  std::vector<int> unrouted_;
  std::vector<std::vector<Best>> best_;
  std::vector<int> used_;
  std::vector<int> depot_used_;
};

void Builder::rebuild(Building& b) const {
  const int n = static_cast<int>(b.nodes.size());
  b.fwd.resize(n);
  b.bwd.resize(n);
  b.fwd[0] = seq_singleton(inst_, b.depot, 0);
  for (int i = 1; i < n; ++i) b.fwd[i] = join(inst_, b.fwd[i - 1], seq_singleton(inst_, b.nodes[i]));
  b.bwd[n - 1] = seq_singleton(inst_, b.depot, 0);
  for (int i = n - 2; i >= 0; --i) b.bwd[i] = join(inst_, seq_singleton(inst_, b.nodes[i]), b.bwd[i + 1]);
}

Route Builder::as_route(const Building& b) const {
  Route r;
  r.depot = b.depot;
  r.vehicle = b.vehicle;
  for (int i = 1; i <= b.size(); ++i) r.visits.push_back(Visit{b.nodes[i], inst_.nodes[b.nodes[i]].demand});
  return r;
}

bool Builder::feasible(const Building& b, int c, int j) const {
  const SeqStat s = join(inst_, join(inst_, b.fwd[j], seq_singleton(inst_, c)), b.bwd[j + 1]);
  if (!capacity_filter(s, b.vehicle, inst_)) return false;
  if (inst_.attributes.backhaul_strict && s.dist >= inst_.big_m) return false;
  return true;
}

Builder::Best Builder::best_for(const Building& b, int c) const {
  Best best;
  if (b.size() == 0) return best;
  const Route partial = as_route(b);
  const int anchor = b.nodes[b.anchor_pos];
  if (kind_ == InsertionKind::nearest) {
    const double cost = insertion_cost(kind_, inst_, partial, c, b.anchor_pos, b.vehicle, anchor);
    if (cost == kInf) return best;
    if (feasible(b, c, b.anchor_pos)) return {cost, b.anchor_pos};
    double detour = kInf;
    for (int j = 0; j <= b.size(); ++j) {
      const double dj = insertion_cost(InsertionKind::modified_cheapest, inst_, partial, c, j,
                                       b.vehicle, anchor);
      if (dj < detour && feasible(b, c, j)) {
        detour = dj;
        best = {cost, j};
      }
    }
    return best;
  }
  for (int j = 0; j <= b.size(); ++j) {
    const double cost = insertion_cost(kind_, inst_, partial, c, j, b.vehicle, anchor);
    if (cost < best.cost && feasible(b, c, j)) best = {cost, j};
  }
  return best;
}

int Builder::nearest_depot(int c) const {
  int best = inst_.depots.front();
  double bd = kInf;
  for (std::size_t s = 0; s < inst_.depots.size(); ++s) {
    if (inst_.depot_limit != kUnlimited && depot_used_[s] >= inst_.depot_limit) continue;
    const int d = inst_.depots[s];
    const double dist = inst_.d(d, c);
    if (dist < bd) {
      bd = dist;
      best = d;
    }
  }
  return best;
}

bool Builder::has_unit(int k) const {
  const VehicleType& vt = inst_.fleet[k];
  return vt.unlimited() || used_[k] < vt.count;
}

bool Builder::seed_ok(int vehicle, int c) const {
  const Node& nd = inst_.nodes[c];
  if (!((nd.allowed >> vehicle) & 1u)) return false;
  if (nd.demand > inst_.fleet[vehicle].capacity) return false;
  if (inst_.attributes.backhaul_strict && nd.role == Role::backhaul) return false;
  return true;
}

int Builder::pick_seed(int vehicle) {
  std::vector<int> cand;
  for (int c : unrouted_)
    if (seed_ok(vehicle, c)) cand.push_back(c);
  if (cand.empty()) return -1;
  return cand[uniform_int(rng_, 0, static_cast<int>(cand.size()) - 1)];
}

void Builder::open_route(int vehicle, int seed) {
  Building b;
  b.vehicle = vehicle;
  b.depot = nearest_depot(seed);
  b.nodes = {b.depot, seed, b.depot};
  b.anchor_pos = 1;
  rebuild(b);
  ++used_[vehicle];
  for (std::size_t s = 0; s < inst_.depots.size(); ++s)
    if (inst_.depots[s] == b.depot) ++depot_used_[s];
  unrouted_.erase(std::find(unrouted_.begin(), unrouted_.end(), seed));
  routes_.push_back(std::move(b));
  best_.emplace_back(inst_.size());
}

Solution Builder::run() {
  unrouted_ = inst_.customers;
  shuffle(unrouted_, rng_);
  used_.assign(inst_.num_types(), 0);
  depot_used_.assign(inst_.depots.size(), 0);

  std::vector<int> by_cap(inst_.user_types);
  std::iota(by_cap.begin(), by_cap.end(), 0);
  std::stable_sort(by_cap.begin(), by_cap.end(), [this](int a, int b) {
    return inst_.fleet[a].capacity > inst_.fleet[b].capacity;
  });
  std::vector<int> units;
  const int n = inst_.num_customers();
  if (inst_.fixed_fleet()) {
    for (int k : by_cap)
      for (int u = 0; u < inst_.fleet[k].count; ++u) units.push_back(k);
  } else {
    const int qmax = std::max(inst_.max_capacity(), 1);
    int needed = std::max(1, (inst_.total_demand + qmax - 1) / qmax);
    for (int k : by_cap) {
      const VehicleType& vt = inst_.fleet[k];
      const int take = vt.unlimited() ? needed : std::min(needed, vt.count);
      for (int u = 0; u < take; ++u) units.push_back(k);
      needed -= take;
      if (needed <= 0) break;
    }
  }
  if (static_cast<int>(units.size()) > n) units.resize(n);
  for (int k : units) {
    if (unrouted_.empty()) break;
    const int seed = pick_seed(k);
    if (seed >= 0) open_route(k, seed);
  }
  for (std::size_t r = 0; r < routes_.size(); ++r)
    for (int c : unrouted_) best_[r][c] = best_for(routes_[r], c);

  while (!unrouted_.empty()) {
    double bc = kInf;
    int br = -1, bcust = -1;
    for (int c : unrouted_) {
      for (std::size_t r = 0; r < routes_.size(); ++r) {
        if (best_[r][c].cost < bc) {
          bc = best_[r][c].cost;
          br = static_cast<int>(r);
          bcust = c;
        }
      }
    }
    if (br < 0) {
      // No route takes any remaining customer: open a new one.
      const int seed_c = unrouted_.front();
      int type = -1;
      for (int k : by_cap) {
        if (has_unit(k) && seed_ok(k, seed_c)) {
          type = k;
          break;
        }
      }
      if (type < 0) {
        for (int c : unrouted_) {
          for (int k : by_cap) {
            if (has_unit(k) && seed_ok(k, c)) {
              type = k;
              break;
            }
          }
          if (type >= 0) {
            open_route(type, c);
            break;
          }
        }
        if (type < 0) {
          const Node& nd = inst_.nodes[seed_c];
          for (int k : by_cap)
            if (has_unit(k) && ((nd.allowed >> k) & 1u) && nd.demand <= inst_.fleet[k].capacity) {
              type = k;
              break;
            }
          if (type < 0) type = inst_.has_extra() ? inst_.extra_type() : by_cap.front();
          open_route(type, seed_c);
        }
      } else {
        open_route(type, seed_c);
      }
      const std::size_t r = routes_.size() - 1;
      for (int c : unrouted_) best_[r][c] = best_for(routes_[r], c);
      continue;
    }
    Building& b = routes_[br];
    const int pos = best_[br][bcust].pos;
    b.nodes.insert(b.nodes.begin() + pos + 1, bcust);
    b.anchor_pos = pos + 1;
    rebuild(b);
    unrouted_.erase(std::find(unrouted_.begin(), unrouted_.end(), bcust));
    for (int c : unrouted_) best_[br][c] = best_for(b, c);
  }

  Solution sol;
  for (const Building& b : routes_) sol.routes.push_back(as_route(b));
  for (std::size_t s = 0; s < inst_.depots.size(); ++s) {
    if (inst_.depot_limit != kUnlimited && depot_used_[s] >= inst_.depot_limit) continue;
    for (int k = 0; k < inst_.user_types; ++k) {
      if (!has_unit(k)) continue;
      Route spare;
      spare.depot = inst_.depots[s];
      spare.vehicle = k;
      sol.routes.push_back(spare);
    }
  }
  return sol;
}

}  // namespace

Solution build_initial(const Instance& inst, const SolverParams& params, Rng& rng,
                       std::optional<InsertionKind> kind) {
  const InsertionKind k =
      kind ? *kind : (uniform_int(rng, 0, 1) == 0 ? InsertionKind::nearest : InsertionKind::modified_cheapest);
  Builder b(inst, rng, k);
  Solution sol = b.run();
  refresh(inst, sol, params.omega);
  return sol;
}

}  // namespace hfvrp
