#include "hfvrp/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hfvrp/assign.hpp"
#include "hfvrp/eval.hpp"

namespace hfvrp {

namespace {

constexpr double kEps = 1e-6;

}  // namespace

const char* to_string(Neighborhood n) {
  switch (n) {
    case Neighborhood::shift10: return "Shift(1,0)";
    case Neighborhood::shift20: return "Shift(2,0)";
    case Neighborhood::swap11: return "Swap(1,1)";
    case Neighborhood::swap21: return "Swap(2,1)";
    case Neighborhood::swap22: return "Swap(2,2)";
    case Neighborhood::two_opt_star: return "2-opt*";
    case Neighborhood::k_shift: return "k-Shift";
    case Neighborhood::shift_depot: return "ShiftDepot";
    case Neighborhood::swap_depot: return "SwapDepot";
    case Neighborhood::swap11_star: return "Swap(1,1)*";
    case Neighborhood::swap21_star: return "Swap(2,1)*";
    case Neighborhood::route_addition: return "RouteAddition";
    case Neighborhood::k_split: return "k-Split";
  }
  return "?";
}

const char* to_string(IntraNeighborhood n) {
  switch (n) {
    case IntraNeighborhood::reinsertion: return "Reinsertion";
    case IntraNeighborhood::or_opt2: return "Or-opt-2";
    case IntraNeighborhood::or_opt3: return "Or-opt-3";
    case IntraNeighborhood::two_opt: return "2-opt";
    case IntraNeighborhood::exchange: return "Exchange";
  }
  return "?";
}

NeighborhoodSet NeighborhoodSet::for_instance(const Instance& inst) {
  NeighborhoodSet s;
  s.inter = {Neighborhood::shift10, Neighborhood::shift20, Neighborhood::swap11,
             Neighborhood::swap21,  Neighborhood::swap22,  Neighborhood::two_opt_star,
             Neighborhood::k_shift};
  if (inst.attributes.multi_depot && inst.depots.size() > 1) {
    s.inter.push_back(Neighborhood::shift_depot);
    s.inter.push_back(Neighborhood::swap_depot);
  }
  if (inst.attributes.split_delivery) {
    s.inter.push_back(Neighborhood::swap11_star);
    s.inter.push_back(Neighborhood::swap21_star);
    s.inter.push_back(Neighborhood::route_addition);
    s.inter.push_back(Neighborhood::k_split);
  }
  s.intra = {IntraNeighborhood::reinsertion, IntraNeighborhood::or_opt2,
             IntraNeighborhood::or_opt3, IntraNeighborhood::two_opt, IntraNeighborhood::exchange};
  return s;
}

LocalSearch::LocalSearch(const Instance& inst, SearchOptions opt)
    : inst_(inst), opt_(opt), set_(NeighborhoodSet::for_instance(inst)) {
  slot_of_.assign(inst.size(), -1);
  for (std::size_t s = 0; s < inst.depots.size(); ++s)
    slot_of_[inst.depots[s]] = static_cast<int>(s);
  if (opt_.cns != CnsMode::off) opt_.cache = false;
}

SeqStat LocalSearch::single(int node, int quantity) const {
  return seq_singleton(inst_, node, quantity);
}

SeqStat LocalSearch::segment(const RouteState& r, int from, int to) const {
  SeqStat s = single(r.nodes[from], r.qty[from]);
  for (int i = from + 1; i <= to; ++i) s = join(inst_, s, single(r.nodes[i], r.qty[i]));
  return s;
}

SeqStat LocalSearch::suffix_to(const RouteState& src, int from, int depot) const {
  if (depot == src.depot) return src.bwd[from];
  const SeqStat end = single(depot, 0);
  if (from > src.size()) return end;
  return join(inst_, src.core[from], end);
}

SeqStat LocalSearch::with_depot(int depot, const std::vector<int>& nodes,
                                const std::vector<int>& qty) const {
  SeqStat s = single(depot, 0);
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) s = join(inst_, s, single(nodes[i], qty[i]));
  return join(inst_, s, single(depot, 0));
}

double LocalSearch::route_cost_on(const SeqStat& s, int type) const {
  if (s.customers == 0) return 0.0;
  if (!capacity_filter(s, type, inst_)) return kInf;
  return route_cost(s, inst_.fleet[type], opt_.omega);
}

void LocalSearch::rebuild(RouteState& r) {
  const int n = static_cast<int>(r.nodes.size());
  r.nodes.front() = r.depot;
  r.nodes.back() = r.depot;
  r.qty.front() = 0;
  r.qty.back() = 0;
  r.fwd.resize(n);
  r.bwd.resize(n);
  r.core.resize(n);
  r.fwd[0] = single(r.depot, 0);
  for (int i = 1; i < n; ++i) r.fwd[i] = join(inst_, r.fwd[i - 1], single(r.nodes[i], r.qty[i]));
  r.bwd[n - 1] = single(r.depot, 0);
  for (int i = n - 2; i >= 0; --i) r.bwd[i] = join(inst_, single(r.nodes[i], r.qty[i]), r.bwd[i + 1]);
  if (n > 2) {
    r.core[n - 2] = single(r.nodes[n - 2], r.qty[n - 2]);
    for (int i = n - 3; i >= 1; --i) r.core[i] = join(inst_, single(r.nodes[i], r.qty[i]), r.core[i + 1]);
  }
  r.fwd_cols.resize(n);
  r.bwd_cols.resize(n);
  for (int i = 0; i < n; ++i) {
    r.fwd_cols.set(i, r.fwd[i]);
    r.bwd_cols.set(i, r.bwd[i]);
  }
  r.cost = r.empty() ? 0.0 : route_cost(r.stat(), inst_.fleet[r.vehicle], opt_.omega);
  r.uid = next_uid_++;
}

void LocalSearch::set_visits(int route, const std::vector<int>& nodes, const std::vector<int>& qty) {
  RouteState& r = routes_[route];
  r.nodes = nodes;
  r.qty = qty;
  rebuild(r);
}

std::vector<Visit> LocalSearch::visits_of(const RouteState& r) const {
  std::vector<Visit> v;
  for (int i = 1; i <= r.size(); ++i) v.push_back(Visit{r.nodes[i], r.qty[i]});
  return v;
}

void LocalSearch::load(const Solution& sol) {
  routes_.clear();
  for (const Route& rt : sol.routes) {
    if (rt.empty()) continue;
    RouteState r;
    r.depot = rt.depot;
    r.vehicle = rt.vehicle;
    r.nodes.push_back(rt.depot);
    r.qty.push_back(0);
    for (const Visit& v : rt.visits) {
      r.nodes.push_back(v.customer);
      r.qty.push_back(v.quantity);
    }
    r.nodes.push_back(rt.depot);
    r.qty.push_back(0);
    rebuild(r);
    routes_.push_back(std::move(r));
  }
  for (auto& c : cache_) c.clear();
  sync_spares();
}

void LocalSearch::sync_spares() {
  const int types = inst_.num_types();
  used_.assign(types, 0);
  depot_used_.assign(inst_.depots.size(), 0);
  for (const RouteState& r : routes_) {
    if (r.empty()) continue;
    ++used_[r.vehicle];
    ++depot_used_[slot_of_[r.depot]];
  }
  active_.assign(routes_.size(), 0);
  std::vector<int> spare(inst_.depots.size() * types, -1);
  for (std::size_t i = 0; i < routes_.size(); ++i) {
    const RouteState& r = routes_[i];
    if (!r.empty()) {
      active_[i] = 1;
      continue;
    }
    int& slot = spare[slot_of_[r.depot] * types + r.vehicle];
    if (slot < 0) slot = static_cast<int>(i);
  }
  for (std::size_t d = 0; d < inst_.depots.size(); ++d) {
    const bool room = inst_.depot_limit == kUnlimited || depot_used_[d] < inst_.depot_limit;
    for (int k = 0; k < types; ++k) {
      const VehicleType& vt = inst_.fleet[k];
      const bool want = room && !vt.extra && (vt.unlimited() || used_[k] < vt.count);
      int idx = spare[d * types + k];
      if (!want) continue;
      if (idx < 0) {
        RouteState r;
        r.depot = inst_.depots[d];
        r.vehicle = k;
        r.nodes = {r.depot, r.depot};
        r.qty = {0, 0};
        rebuild(r);
        routes_.push_back(std::move(r));
        active_.push_back(0);
        idx = static_cast<int>(routes_.size()) - 1;
      }
      active_[idx] = 1;
    }
  }
}

bool LocalSearch::active(int route) const { return active_[route] != 0; }

double LocalSearch::objective() const {
  double t = 0.0;
  for (const RouteState& r : routes_) t += r.cost;
  return t;
}

Solution LocalSearch::solution() const {
  Solution sol;
  for (const RouteState& r : routes_) {
    if (r.empty()) continue;
    sol.routes.push_back(make_route(inst_, r.depot, r.vehicle, visits_of(r), opt_.omega));
  }
  refresh(inst_, sol, opt_.omega);
  return sol;
}

void LocalSearch::consider(Move& best, bool& found, const Move& cand) const {
  if (cand.delta < best.delta) {
    best = cand;
    found = true;
  }
}

bool LocalSearch::price_many(const std::vector<std::pair<int, SeqStat>>& changed, Move& m) {
  ++stats_.evaluations;
  m.all_vehicles.clear();
  if (opt_.cns == CnsMode::pda) {
    std::vector<RouteEval> before, after;
    before.reserve(routes_.size());
    for (const RouteState& r : routes_) before.push_back(RouteEval{r.stat(), r.vehicle, r.empty()});
    after = before;
    std::vector<int> touched;
    for (const auto& [idx, st] : changed) {
      after[idx].stat = st;
      after[idx].empty = st.customers == 0;
      touched.push_back(idx);
    }
    const CnsResult res = cns_cost(inst_, before, after, touched, CnsMode::pda, opt_.omega);
    if (!res.feasible) return false;
    m.delta = res.delta;
    m.all_vehicles = res.vehicles;
    return true;
  }
  double delta = 0.0;
  std::vector<int> vehicles;
  bool plain_ok = true;
  for (const auto& [idx, st] : changed) {
    const double c = route_cost_on(st, routes_[idx].vehicle);
    if (c == kInf) plain_ok = false;
    delta += c - routes_[idx].cost;
    vehicles.push_back(routes_[idx].vehicle);
  }
  if (opt_.cns == CnsMode::sfr) {
    std::vector<int> available(inst_.num_types());
    for (int k = 0; k < inst_.num_types(); ++k)
      available[k] = inst_.fleet[k].unlimited() ? kUnlimited : inst_.fleet[k].count - used_[k];
    std::vector<RouteEval> evals;
    for (const auto& [idx, st] : changed) {
      const RouteState& r = routes_[idx];
      const bool now_empty = st.customers == 0;
      if (!r.empty() && now_empty && available[r.vehicle] != kUnlimited) ++available[r.vehicle];
      if (r.empty() && !now_empty && available[r.vehicle] != kUnlimited) --available[r.vehicle];
      evals.push_back(RouteEval{st, r.vehicle, now_empty});
    }
    for (int& a : available)
      if (a != kUnlimited) a = std::max(a, 0);
    if (auto re = sfr(inst_, evals, available, opt_.omega)) {
      delta = 0.0;
      plain_ok = true;
      for (std::size_t i = 0; i < changed.size(); ++i) {
        const double c = route_cost_on(changed[i].second, re->vehicles[i]);
        if (c == kInf) plain_ok = false;
        delta += c - routes_[changed[i].first].cost;
      }
      vehicles = re->vehicles;
    }
  }
  if (!plain_ok) return false;
  m.delta = delta;
  if (changed.size() >= 1) m.v1 = vehicles[0];
  if (changed.size() >= 2) m.v2 = vehicles[1];
  if (changed.size() > 2 || m.tag == Neighborhood::route_addition ||
      m.tag == Neighborhood::k_split) {
    m.all_vehicles.assign(routes_.size(), -1);
    for (std::size_t i = 0; i < changed.size(); ++i) m.all_vehicles[changed[i].first] = vehicles[i];
    for (std::size_t i = 0; i < routes_.size(); ++i)
      if (m.all_vehicles[i] < 0) m.all_vehicles[i] = routes_[i].vehicle;
  }
  return true;
}

bool LocalSearch::price_pair(const SeqStat& s1, int r1, const SeqStat& s2, int r2, Move& m) {
  if (opt_.cns == CnsMode::off) {
    ++stats_.evaluations;
    const RouteState& a = routes_[r1];
    const RouteState& b = routes_[r2];
    const double c1 = route_cost_on(s1, a.vehicle);
    if (c1 == kInf) return false;
    const double c2 = route_cost_on(s2, b.vehicle);
    if (c2 == kInf) return false;
    m.delta = (c1 + c2) - (a.cost + b.cost);
    m.v1 = a.vehicle;
    m.v2 = b.vehicle;
    return true;
  }
  return price_many({{r1, s1}, {r2, s2}}, m);
}

bool LocalSearch::price_single(const SeqStat& s1, int r1, Move& m) {
  if (opt_.cns == CnsMode::off) {
    ++stats_.evaluations;
    const RouteState& a = routes_[r1];
    const double c1 = route_cost_on(s1, a.vehicle);
    if (c1 == kInf) return false;
    m.delta = c1 - a.cost;
    m.v1 = a.vehicle;
    return true;
  }
  return price_many({{r1, s1}}, m);
}

bool LocalSearch::ordered(Neighborhood n) const {
  switch (n) {
    case Neighborhood::swap11:
    case Neighborhood::swap22:
    case Neighborhood::two_opt_star:
      return false;
    default:
      return true;
  }
}

std::optional<Move> LocalSearch::explore(Neighborhood n) {
  Move best;
  best.delta = -kEps;
  bool found = false;
  switch (n) {
    case Neighborhood::shift_depot:
      explore_shift_depot(best, found);
      break;
    case Neighborhood::swap_depot:
      explore_swap_depot(best, found);
      break;
    case Neighborhood::route_addition:
      explore_route_addition(best, found);
      break;
    case Neighborhood::k_split:
      explore_k_split(best, found);
      break;
    default: {
      const bool use_cache = opt_.cache && n != Neighborhood::swap11_star &&
                             n != Neighborhood::swap21_star;
      auto& cache = cache_[static_cast<int>(n)];
      if (cache.size() > 8 * routes_.size() * routes_.size() + 4096) cache.clear();
      const int R = static_cast<int>(routes_.size());
      const bool ord = ordered(n);
      for (int r1 = 0; r1 < R; ++r1) {
        if (!active(r1)) continue;
        for (int r2 = ord ? 0 : r1 + 1; r2 < R; ++r2) {
          if (r2 == r1 || !active(r2)) continue;
          if (routes_[r1].empty() && routes_[r2].empty()) continue;
          if (ord && routes_[r1].empty()) continue;
          if (!use_cache) {
            explore_pair(n, r1, r2, best, found);
            continue;
          }
          const std::uint64_t key = (routes_[r1].uid << 32) ^ routes_[r2].uid;
          auto it = cache.find(key);
          if (it == cache.end() || it->second.uid1 != routes_[r1].uid ||
              it->second.uid2 != routes_[r2].uid) {
            Cached c;
            c.uid1 = routes_[r1].uid;
            c.uid2 = routes_[r2].uid;
            c.move.delta = -kEps;
            explore_pair(n, r1, r2, c.move, c.found);
            it = cache.insert_or_assign(key, std::move(c)).first;
          }
          if (it->second.found) consider(best, found, it->second.move);
        }
      }
    }
  }
  if (!found) return std::nullopt;
  return best;
}

void LocalSearch::explore_pair(Neighborhood n, int r1, int r2, Move& best, bool& found) {
  switch (n) {
    case Neighborhood::shift10: pair_shift(r1, r2, 1, best, found); break;
    case Neighborhood::shift20: pair_shift(r1, r2, 2, best, found); break;
    case Neighborhood::swap11: pair_swap(r1, r2, 1, 1, best, found); break;
    case Neighborhood::swap21: pair_swap(r1, r2, 2, 1, best, found); break;
    case Neighborhood::swap22: pair_swap(r1, r2, 2, 2, best, found); break;
    case Neighborhood::two_opt_star: pair_two_opt_star(r1, r2, best, found); break;
    case Neighborhood::k_shift: pair_k_shift(r1, r2, best, found); break;
    case Neighborhood::swap11_star: pair_swap11_star(r1, r2, best, found); break;
    case Neighborhood::swap21_star: pair_swap21_star(r1, r2, best, found); break;
    default: break;
  }
}

namespace {

void erase_range(std::vector<int>& v, int from, int len) {
  v.erase(v.begin() + from, v.begin() + from + len);
}

}  // namespace

void LocalSearch::apply(const Move& m) {
  if (m.intra) {
    apply_intra(m);
    return;
  }
  const double before = objective();
  RouteState& a = routes_[m.r1];
  std::vector<int> an = a.nodes, aq = a.qty;
  std::vector<int> bn, bq;
  if (m.r2 >= 0) {
    bn = routes_[m.r2].nodes;
    bq = routes_[m.r2].qty;
  }
  std::vector<int> touched{m.r1};
  if (m.r2 >= 0) touched.push_back(m.r2);
  switch (m.tag) {
    case Neighborhood::shift10:
    case Neighborhood::shift20: {
      const int len = m.tag == Neighborhood::shift10 ? 1 : 2;
      std::vector<int> sn(an.begin() + m.p, an.begin() + m.p + len);
      std::vector<int> sq(aq.begin() + m.p, aq.begin() + m.p + len);
      erase_range(an, m.p, len);
      erase_range(aq, m.p, len);
      bn.insert(bn.begin() + m.q + 1, sn.begin(), sn.end());
      bq.insert(bq.begin() + m.q + 1, sq.begin(), sq.end());
      break;
    }
    case Neighborhood::swap11:
    case Neighborhood::swap21:
    case Neighborhood::swap22: {
      const int l1 = m.tag == Neighborhood::swap11 ? 1 : 2;
      const int l2 = m.tag == Neighborhood::swap22 ? 2 : 1;
      std::vector<int> s1n(an.begin() + m.p, an.begin() + m.p + l1);
      std::vector<int> s1q(aq.begin() + m.p, aq.begin() + m.p + l1);
      std::vector<int> s2n(bn.begin() + m.q, bn.begin() + m.q + l2);
      std::vector<int> s2q(bq.begin() + m.q, bq.begin() + m.q + l2);
      erase_range(an, m.p, l1);
      erase_range(aq, m.p, l1);
      an.insert(an.begin() + m.p, s2n.begin(), s2n.end());
      aq.insert(aq.begin() + m.p, s2q.begin(), s2q.end());
      erase_range(bn, m.q, l2);
      erase_range(bq, m.q, l2);
      bn.insert(bn.begin() + m.q, s1n.begin(), s1n.end());
      bq.insert(bq.begin() + m.q, s1q.begin(), s1q.end());
      break;
    }
    case Neighborhood::two_opt_star: {
      std::vector<int> na(an.begin(), an.begin() + m.p + 1), qa(aq.begin(), aq.begin() + m.p + 1);
      std::vector<int> nb(bn.begin(), bn.begin() + m.q + 1), qb(bq.begin(), bq.begin() + m.q + 1);
      na.insert(na.end(), bn.begin() + m.q + 1, bn.end());
      qa.insert(qa.end(), bq.begin() + m.q + 1, bq.end());
      nb.insert(nb.end(), an.begin() + m.p + 1, an.end());
      qb.insert(qb.end(), aq.begin() + m.p + 1, aq.end());
      an = std::move(na);
      aq = std::move(qa);
      bn = std::move(nb);
      bq = std::move(qb);
      break;
    }
    case Neighborhood::k_shift: {
      std::vector<int> sn(an.begin() + m.p, an.begin() + m.p + m.k);
      std::vector<int> sq(aq.begin() + m.p, aq.begin() + m.p + m.k);
      erase_range(an, m.p, m.k);
      erase_range(aq, m.p, m.k);
      bn.insert(bn.end() - 1, sn.begin(), sn.end());
      bq.insert(bq.end() - 1, sq.begin(), sq.end());
      break;
    }
    case Neighborhood::shift_depot:
      routes_[m.r1].depot = m.depot;
      break;
    case Neighborhood::swap_depot:
      std::swap(routes_[m.r1].depot, routes_[m.r2].depot);
      break;
    case Neighborhood::swap11_star: {
      const int a_node = an[m.p], a_q = aq[m.p];
      const int b_node = bn[m.q], b_q = bq[m.q];
      // r1: b arrives with y; a keeps a_q - x.
      std::vector<int> ins1n, ins1q;
      if (m.x < a_q) {
        ins1n = {a_node};
        ins1q = {a_q - m.x};
      }
      ins1n.insert(m.side1 ? ins1n.end() : ins1n.begin(), b_node);
      ins1q.insert(m.side1 ? ins1q.end() : ins1q.begin(), m.y);
      std::vector<int> ins2n, ins2q;
      if (m.y < b_q) {
        ins2n = {b_node};
        ins2q = {b_q - m.y};
      }
      ins2n.insert(m.side2 ? ins2n.end() : ins2n.begin(), a_node);
      ins2q.insert(m.side2 ? ins2q.end() : ins2q.begin(), m.x);
      erase_range(an, m.p, 1);
      erase_range(aq, m.p, 1);
      an.insert(an.begin() + m.p, ins1n.begin(), ins1n.end());
      aq.insert(aq.begin() + m.p, ins1q.begin(), ins1q.end());
      erase_range(bn, m.q, 1);
      erase_range(bq, m.q, 1);
      bn.insert(bn.begin() + m.q, ins2n.begin(), ins2n.end());
      bq.insert(bq.begin() + m.q, ins2q.begin(), ins2q.end());
      break;
    }
    case Neighborhood::swap21_star: {
      const int b_node = bn[m.q], b_q = bq[m.q];
      std::vector<int> segn(an.begin() + m.p, an.begin() + m.p + 2);
      std::vector<int> segq(aq.begin() + m.p, aq.begin() + m.p + 2);
      erase_range(an, m.p, 2);
      erase_range(aq, m.p, 2);
      an.insert(an.begin() + m.p, b_node);
      aq.insert(aq.begin() + m.p, m.y);
      std::vector<int> ins2n = segn, ins2q = segq;
      ins2n.insert(m.side2 ? ins2n.end() : ins2n.begin(), b_node);
      ins2q.insert(m.side2 ? ins2q.end() : ins2q.begin(), b_q - m.y);
      erase_range(bn, m.q, 1);
      erase_range(bq, m.q, 1);
      bn.insert(bn.begin() + m.q, ins2n.begin(), ins2n.end());
      bq.insert(bq.begin() + m.q, ins2q.begin(), ins2q.end());
      break;
    }
    case Neighborhood::route_addition: {
      touched.clear();
      for (std::size_t i = 0; i < routes_.size(); ++i) {
        if (static_cast<int>(i) == m.r2) continue;
        RouteState& r = routes_[i];
        auto it = std::find(r.nodes.begin() + 1, r.nodes.end() - 1, m.p);
        if (it == r.nodes.end() - 1) continue;
        const auto pos = it - r.nodes.begin();
        r.nodes.erase(it);
        r.qty.erase(r.qty.begin() + pos);
        rebuild(r);
        touched.push_back(static_cast<int>(i));
      }
      set_visits(m.r2, {routes_[m.r2].depot, m.p, routes_[m.r2].depot},
                 {0, inst_.nodes[m.p].demand, 0});
      touched.push_back(m.r2);
      break;
    }
    case Neighborhood::k_split: {
      const int c = an[m.p];
      erase_range(an, m.p, 1);
      erase_range(aq, m.p, 1);
      set_visits(m.r1, an, aq);
      for (const SplitPart& part : m.parts) {
        RouteState& r = routes_[part.route];
        std::vector<int> nn = r.nodes, nq = r.qty;
        if (part.merge) {
          nq[part.pos] += part.quantity;
        } else {
          nn.insert(nn.begin() + part.pos + 1, c);
          nq.insert(nq.begin() + part.pos + 1, part.quantity);
        }
        set_visits(part.route, nn, nq);
        touched.push_back(part.route);
      }
      break;
    }
  }
  const bool rebuilt = m.tag == Neighborhood::route_addition || m.tag == Neighborhood::k_split;
  if (!rebuilt) {
    if (m.v1 >= 0) routes_[m.r1].vehicle = m.v1;
    if (m.tag == Neighborhood::shift_depot || m.tag == Neighborhood::swap_depot) {
      an = routes_[m.r1].nodes;
      if (m.r2 >= 0) bn = routes_[m.r2].nodes;
    }
    set_visits(m.r1, an, aq);
    if (m.r2 >= 0) {
      if (m.v2 >= 0) routes_[m.r2].vehicle = m.v2;
      set_visits(m.r2, bn, bq);
    }
  }
  if (!m.all_vehicles.empty()) {
    for (std::size_t i = 0; i < m.all_vehicles.size() && i < routes_.size(); ++i) {
      if (routes_[i].vehicle != m.all_vehicles[i]) {
        routes_[i].vehicle = m.all_vehicles[i];
        rebuild(routes_[i]);
      }
    }
  }
  ++stats_.moves;
  sync_spares();
  if (opt_.check_moves) check_delta(before, m);
}

void LocalSearch::check_delta(double before, const Move& m) const {
  double after = 0.0;
  for (const RouteState& r : routes_) {
    if (r.empty()) continue;
    const SeqStat s = route_stat(inst_, r.depot, visits_of(r), false);
    after += route_cost(s, inst_.fleet[r.vehicle], opt_.omega);
  }
  const double realized = after - before;
  const double tol = 1e-9 * std::max(1.0, std::abs(before));
  if (std::abs(realized - m.delta) > tol) {
    throw MoveCheckError(std::string("delta mismatch in ") +
                         (m.intra ? to_string(*m.intra) : to_string(m.tag)) + ": predicted " +
                         std::to_string(m.delta) + " realized " + std::to_string(realized));
  }
}

void LocalSearch::rvnd(Rng& rng) {
  for (int i = 0; i < static_cast<int>(routes_.size()); ++i)
    if (!routes_[i].empty()) intra_rvnd(i, rng);
  std::vector<Neighborhood> list = set_.inter;
  while (!list.empty()) {
    const int pick = uniform_int(rng, 0, static_cast<int>(list.size()) - 1);
    const Neighborhood n = list[pick];
    auto m = explore(n);
    if (!m) {
      list.erase(list.begin() + pick);
      continue;
    }
    std::vector<int> touched{m->r1};
    if (m->r2 >= 0) touched.push_back(m->r2);
    for (const SplitPart& part : m->parts) touched.push_back(part.route);
    if (m->tag == Neighborhood::route_addition) {
      touched.clear();
      for (int i = 0; i < static_cast<int>(routes_.size()); ++i) {
        const auto& nd = routes_[i].nodes;
        if (std::find(nd.begin() + 1, nd.end() - 1, m->p) != nd.end() - 1) touched.push_back(i);
      }
      touched.push_back(m->r2);
    }
    apply(*m);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int r : touched)
      if (!routes_[r].empty()) intra_rvnd(r, rng);
    list = set_.inter;
  }
}

Solution rvnd(const Instance& inst, const Solution& sol, double omega, Rng& rng, CnsMode cns) {
  SearchOptions opt;
  opt.omega = omega;
  opt.cns = cns;
  LocalSearch ls(inst, opt);
  ls.load(sol);
  ls.rvnd(rng);
  return ls.solution();
}

std::optional<Move> explore(Neighborhood n, const Instance& inst, const Solution& sol,
                            double omega, CnsMode cns) {
  SearchOptions opt;
  opt.omega = omega;
  opt.cns = cns;
  LocalSearch ls(inst, opt);
  ls.load(sol);
  return ls.explore(n);
}

Route intra_rvnd(const Instance& inst, const Route& route, double omega, Rng& rng) {
  if (route.empty()) return route;
  SearchOptions opt;
  opt.omega = omega;
  LocalSearch ls(inst, opt);
  Solution s;
  s.routes.push_back(route);
  ls.load(s);
  ls.intra_rvnd(0, rng);
  const RouteState& r = ls.routes()[0];
  std::vector<Visit> v;
  for (int i = 1; i <= r.size(); ++i) v.push_back(Visit{r.nodes[i], r.qty[i]});
  return make_route(inst, r.depot, r.vehicle, std::move(v), omega);
}

}  // namespace hfvrp
