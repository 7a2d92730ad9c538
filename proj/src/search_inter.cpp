#include <algorithm>

#include "hfvrp/eval.hpp"
#include "hfvrp/kernels.hpp"
#include "hfvrp/search.hpp"

namespace hfvrp {

namespace {

bool type_ok(const SeqStat& s, int type) { return (s.types >> type) & 1u; }

}  // namespace

void LocalSearch::mark_pair(int r1, int r2) {
  if (pos_a_.empty()) {
    pos_a_.assign(inst_.size(), -1);
    pos_b_.assign(inst_.size(), -1);
  }
  for (int c : marked_) pos_a_[c] = pos_b_[c] = -1;
  marked_.clear();
  shared_.clear();
  const RouteState& a = routes_[r1];
  const RouteState& b = routes_[r2];
  for (int i = 1; i <= a.size(); ++i) {
    pos_a_[a.nodes[i]] = i;
    marked_.push_back(a.nodes[i]);
  }
  for (int i = 1; i <= b.size(); ++i) {
    const int c = b.nodes[i];
    pos_b_[c] = i;
    marked_.push_back(c);
    if (pos_a_[c] >= 0) shared_.push_back(c);
  }
}

// a[p, p+len) goes to b and b[q, q+len2) goes to a.
bool LocalSearch::moved_clash(int p, int len, int q, int len2) const {
  for (int c : shared_) {
    const int pa = pos_a_[c], pb = pos_b_[c];
    const bool leaves_a = pa >= p && pa < p + len;
    const bool leaves_b = pb >= q && pb < q + len2;
    if (leaves_a != leaves_b) return true;
  }
  return false;
}

// a[1..p] joins b[q+1..] and b[1..q] joins a[p+1..].
bool LocalSearch::tails_clash(int p, int q) const {
  for (int c : shared_) {
    const bool head_a = pos_a_[c] <= p;
    const bool head_b = pos_b_[c] <= q;
    if (head_a != head_b) return true;
  }
  return false;
}

void LocalSearch::pair_shift(int r1, int r2, int len, Move& best, bool& found) {
  const RouteState& a = routes_[r1];
  const RouteState& b = routes_[r2];
  const int n1 = a.size();
  const int n2 = b.size();
  if (n1 < len) return;
  const VehicleType& vb = inst_.fleet[b.vehicle];
  const bool plain = opt_.cns == CnsMode::off;
  const bool mixed = inst_.attributes.backhaul_mixed;
  const std::size_t lanes = static_cast<std::size_t>(n2) + 1;
  const bool sd = inst_.attributes.split_delivery;
  if (sd) mark_pair(r1, r2);
  for (int p = 1; p + len - 1 <= n1; ++p) {
    if (sd && moved_clash(p, len, 0, 0)) continue;
    const SeqStat seg = segment(a, p, p + len - 1);
    if (plain && !type_ok(seg, b.vehicle)) continue;
    if (plain && !mixed && b.load() + seg.load() > vb.capacity) continue;
    const SeqStat s1 = join(inst_, a.fwd[p - 1], a.bwd[p + len]);
    Move cand;
    cand.tag = len == 1 ? Neighborhood::shift10 : Neighborhood::shift20;
    cand.r1 = r1;
    cand.r2 = r2;
    cand.p = p;
    if (plain) {
      const double c1 = route_cost_on(s1, a.vehicle);
      if (c1 == kInf) continue;
      scratch_in_.resize(lanes);
      scratch_out_.resize(lanes);
      scratch_cost_.resize(lanes);
      for (std::size_t j = 0; j < lanes; ++j) {
        scratch_in_[j] = inst_.d(b.nodes[j], seg.first);
        scratch_out_[j] = inst_.d(seg.last, b.nodes[j + 1]);
      }
      InsertScan sc;
      sc.prefix = &b.fwd_cols;
      sc.prefix_offset = 0;
      sc.suffix = &b.bwd_cols;
      sc.suffix_offset = 1;
      sc.d_in = scratch_in_.data();
      sc.d_out = scratch_out_.data();
      sc.mid = seg;
      sc.capacity = vb.capacity;
      if (inst_.duration_limit) sc.limit = *inst_.duration_limit + 1e-9;
      sc.limit_on_distance = inst_.limit_on == LimitOn::distance;
      sc.fixed = vb.fixed_cost;
      sc.var = vb.var_cost;
      sc.omega = opt_.omega;
      sc.count = lanes;
      insert_costs(sc, scratch_cost_.data());
      stats_.evaluations += static_cast<long long>(lanes);
      const double base = a.cost + b.cost;
      for (std::size_t j = 0; j < lanes; ++j) {
        if (scratch_cost_[j] == kInf) continue;
        const double delta = (c1 + scratch_cost_[j]) - base;
        if (delta < best.delta) {
          cand.q = static_cast<int>(j);
          cand.delta = delta;
          cand.v1 = a.vehicle;
          cand.v2 = b.vehicle;
          best = cand;
          found = true;
        }
      }
      continue;
    }
    for (int q = 0; q <= n2; ++q) {
      const SeqStat s2 = join(inst_, join(inst_, b.fwd[q], seg), b.bwd[q + 1]);
      cand.q = q;
      if (price_pair(s1, r1, s2, r2, cand)) consider(best, found, cand);
    }
  }
}

void LocalSearch::pair_swap(int r1, int r2, int len1, int len2, Move& best, bool& found) {
  const RouteState& a = routes_[r1];
  const RouteState& b = routes_[r2];
  const int n1 = a.size();
  const int n2 = b.size();
  if (n1 < len1 || n2 < len2) return;
  const bool plain = opt_.cns == CnsMode::off;
  const bool mixed = inst_.attributes.backhaul_mixed;
  const int cap1 = inst_.fleet[a.vehicle].capacity;
  const int cap2 = inst_.fleet[b.vehicle].capacity;
  std::vector<SeqStat> segs_b;
  segs_b.reserve(n2);
  for (int q = 1; q + len2 - 1 <= n2; ++q) segs_b.push_back(segment(b, q, q + len2 - 1));
  const bool sd = inst_.attributes.split_delivery;
  if (sd) mark_pair(r1, r2);
  Neighborhood tag = Neighborhood::swap11;
  if (len1 == 2 && len2 == 1) tag = Neighborhood::swap21;
  if (len1 == 2 && len2 == 2) tag = Neighborhood::swap22;
  for (int p = 1; p + len1 - 1 <= n1; ++p) {
    const SeqStat sa = segment(a, p, p + len1 - 1);
    if (plain && !type_ok(sa, b.vehicle)) continue;
    for (int q = 1; q + len2 - 1 <= n2; ++q) {
      const SeqStat& sb = segs_b[q - 1];
      if (sd && moved_clash(p, len1, q, len2)) continue;
      if (plain) {
        if (!type_ok(sb, a.vehicle)) continue;
        if (!mixed && (a.load() - sa.load() + sb.load() > cap1 ||
                       b.load() - sb.load() + sa.load() > cap2))
          continue;
      }
      const SeqStat s1 = join(inst_, join(inst_, a.fwd[p - 1], sb), a.bwd[p + len1]);
      const SeqStat s2 = join(inst_, join(inst_, b.fwd[q - 1], sa), b.bwd[q + len2]);
      Move cand;
      cand.tag = tag;
      cand.r1 = r1;
      cand.r2 = r2;
      cand.p = p;
      cand.q = q;
      if (price_pair(s1, r1, s2, r2, cand)) consider(best, found, cand);
    }
  }
}

void LocalSearch::pair_two_opt_star(int r1, int r2, Move& best, bool& found) {
  const RouteState& a = routes_[r1];
  const RouteState& b = routes_[r2];
  const int n1 = a.size();
  const int n2 = b.size();
  const bool plain = opt_.cns == CnsMode::off;
  const bool mixed = inst_.attributes.backhaul_mixed;
  const int cap1 = inst_.fleet[a.vehicle].capacity;
  const int cap2 = inst_.fleet[b.vehicle].capacity;
  const bool same = a.vehicle == b.vehicle && a.depot == b.depot;
  const int load1 = a.load();
  const int load2 = b.load();
  const bool sd = inst_.attributes.split_delivery;
  if (sd) mark_pair(r1, r2);
  for (int p = 0; p <= n1; ++p) {
    const int head1 = a.fwd[p].load();
    for (int q = 0; q <= n2; ++q) {
      if (same && ((p == 0 && q == 0) || (p == n1 && q == n2))) continue;
      if (sd && tails_clash(p, q)) continue;
      const int head2 = b.fwd[q].load();
      if (plain && !mixed &&
          (head1 + (load2 - head2) > cap1 || head2 + (load1 - head1) > cap2))
        continue;
      const SeqStat t2 = suffix_to(b, q + 1, a.depot);
      const SeqStat t1 = suffix_to(a, p + 1, b.depot);
      if (plain && (!type_ok(t2, a.vehicle) || !type_ok(t1, b.vehicle))) continue;
      const SeqStat s1 = join(inst_, a.fwd[p], t2);
      const SeqStat s2 = join(inst_, b.fwd[q], t1);
      Move cand;
      cand.tag = Neighborhood::two_opt_star;
      cand.r1 = r1;
      cand.r2 = r2;
      cand.p = p;
      cand.q = q;
      if (price_pair(s1, r1, s2, r2, cand)) consider(best, found, cand);
    }
  }
}

void LocalSearch::pair_k_shift(int r1, int r2, Move& best, bool& found) {
  const RouteState& a = routes_[r1];
  const RouteState& b = routes_[r2];
  const int n1 = a.size();
  const int n2 = b.size();
  const bool plain = opt_.cns == CnsMode::off;
  const bool mixed = inst_.attributes.backhaul_mixed;
  const int cap2 = inst_.fleet[b.vehicle].capacity;
  const bool sd = inst_.attributes.split_delivery;
  if (sd) mark_pair(r1, r2);
  for (int k = 1; k <= std::min(3, n1); ++k) {
    for (int p = 1; p + k - 1 <= n1; ++p) {
      if (sd && moved_clash(p, k, 0, 0)) continue;
      const SeqStat seg = segment(a, p, p + k - 1);
      if (plain && !type_ok(seg, b.vehicle)) continue;
      if (plain && !mixed && b.load() + seg.load() > cap2) continue;
      const SeqStat s1 = join(inst_, a.fwd[p - 1], a.bwd[p + k]);
      const SeqStat s2 = join(inst_, join(inst_, b.fwd[n2], seg), b.bwd[n2 + 1]);
      Move cand;
      cand.tag = Neighborhood::k_shift;
      cand.r1 = r1;
      cand.r2 = r2;
      cand.p = p;
      cand.k = k;
      if (price_pair(s1, r1, s2, r2, cand)) consider(best, found, cand);
    }
  }
}

void LocalSearch::explore_shift_depot(Move& best, bool& found) {
  for (int r = 0; r < static_cast<int>(routes_.size()); ++r) {
    if (!active(r) || routes_[r].empty()) continue;
    const RouteState& rt = routes_[r];
    for (std::size_t d = 0; d < inst_.depots.size(); ++d) {
      const int depot = inst_.depots[d];
      if (depot == rt.depot) continue;
      if (inst_.depot_limit != kUnlimited && depot_used_[d] >= inst_.depot_limit) continue;
      const SeqStat s = with_depot(depot, rt.nodes, rt.qty);
      Move cand;
      cand.tag = Neighborhood::shift_depot;
      cand.r1 = r;
      cand.depot = depot;
      if (price_single(s, r, cand)) consider(best, found, cand);
    }
  }
}

void LocalSearch::explore_swap_depot(Move& best, bool& found) {
  const int R = static_cast<int>(routes_.size());
  for (int r1 = 0; r1 < R; ++r1) {
    if (!active(r1) || routes_[r1].empty()) continue;
    for (int r2 = r1 + 1; r2 < R; ++r2) {
      if (!active(r2) || routes_[r2].empty()) continue;
      const RouteState& a = routes_[r1];
      const RouteState& b = routes_[r2];
      if (a.depot == b.depot) continue;
      const SeqStat s1 = with_depot(b.depot, a.nodes, a.qty);
      const SeqStat s2 = with_depot(a.depot, b.nodes, b.qty);
      Move cand;
      cand.tag = Neighborhood::swap_depot;
      cand.r1 = r1;
      cand.r2 = r2;
      if (price_pair(s1, r1, s2, r2, cand)) consider(best, found, cand);
    }
  }
}

}  // namespace hfvrp
