#include <algorithm>
#include <numeric>

#include "hfvrp/eval.hpp"
#include "hfvrp/search.hpp"

namespace hfvrp {

namespace {

std::vector<char> membership(const RouteState& r, int nodes) {
  std::vector<char> in(nodes, 0);
  for (int i = 1; i <= r.size(); ++i) in[r.nodes[i]] = 1;
  return in;
}

}  // namespace

void LocalSearch::pair_swap11_star(int r1, int r2, Move& best, bool& found) {
  const RouteState& a = routes_[r1];
  const RouteState& b = routes_[r2];
  if (a.empty() || b.empty()) return;
  const auto in_a = membership(a, inst_.size());
  const auto in_b = membership(b, inst_.size());
  const int cap1 = inst_.fleet[a.vehicle].capacity;
  const int cap2 = inst_.fleet[b.vehicle].capacity;
  const int load1 = a.load();
  const int load2 = b.load();
  for (int p = 1; p <= a.size(); ++p) {
    const int an = a.nodes[p], aq = a.qty[p];
    if (in_b[an]) continue;
    for (int q = 1; q <= b.size(); ++q) {
      const int bn = b.nodes[q], bq = b.qty[q];
      if (in_a[bn]) continue;
      int x = std::min(aq, cap2 - load2 + bq);
      if (x <= 0) continue;
      int y = std::min(bq, cap1 - load1 + x);
      if (y <= 0) continue;
      if (y < bq) {
        x = std::min(x, cap2 - load2 + y);
        if (x <= 0) continue;
        y = std::min(y, cap1 - load1 + x);
        if (y <= 0) continue;
      }
      if (x == aq && y == bq) continue;
      const SeqStat sb_in = single(bn, y);
      const SeqStat sa_in = single(an, x);
      for (int side1 = 0; side1 < (x < aq ? 2 : 1); ++side1) {
        SeqStat mid1 = sb_in;
        if (x < aq) {
          const SeqStat rest = single(an, aq - x);
          mid1 = side1 ? join(inst_, rest, sb_in) : join(inst_, sb_in, rest);
        }
        const SeqStat s1 = join(inst_, join(inst_, a.fwd[p - 1], mid1), a.bwd[p + 1]);
        for (int side2 = 0; side2 < (y < bq ? 2 : 1); ++side2) {
          SeqStat mid2 = sa_in;
          if (y < bq) {
            const SeqStat rest = single(bn, bq - y);
            mid2 = side2 ? join(inst_, rest, sa_in) : join(inst_, sa_in, rest);
          }
          const SeqStat s2 = join(inst_, join(inst_, b.fwd[q - 1], mid2), b.bwd[q + 1]);
          Move cand;
          cand.tag = Neighborhood::swap11_star;
          cand.r1 = r1;
          cand.r2 = r2;
          cand.p = p;
          cand.q = q;
          cand.x = x;
          cand.y = y;
          cand.side1 = side1;
          cand.side2 = side2;
          if (price_pair(s1, r1, s2, r2, cand)) consider(best, found, cand);
        }
      }
    }
  }
}

void LocalSearch::pair_swap21_star(int r1, int r2, Move& best, bool& found) {
  const RouteState& a = routes_[r1];
  const RouteState& b = routes_[r2];
  if (a.size() < 2 || b.empty()) return;
  const auto in_a = membership(a, inst_.size());
  const auto in_b = membership(b, inst_.size());
  const int cap1 = inst_.fleet[a.vehicle].capacity;
  const int cap2 = inst_.fleet[b.vehicle].capacity;
  const int load1 = a.load();
  const int load2 = b.load();
  for (int p = 1; p + 1 <= a.size(); ++p) {
    if (in_b[a.nodes[p]] || in_b[a.nodes[p + 1]]) continue;
    const SeqStat seg = segment(a, p, p + 1);
    for (int q = 1; q <= b.size(); ++q) {
      const int bn = b.nodes[q], bq = b.qty[q];
      if (in_a[bn]) continue;
      const int y = std::min(bq, cap1 - (load1 - seg.load()));
      if (y <= 0 || y == bq) continue;
      if (load2 - y + seg.load() > cap2) continue;
      const SeqStat s1 = join(inst_, join(inst_, a.fwd[p - 1], single(bn, y)), a.bwd[p + 2]);
      const SeqStat rest = single(bn, bq - y);
      for (int side2 = 0; side2 < 2; ++side2) {
        const SeqStat mid2 = side2 ? join(inst_, seg, rest) : join(inst_, rest, seg);
        const SeqStat s2 = join(inst_, join(inst_, b.fwd[q - 1], mid2), b.bwd[q + 1]);
        Move cand;
        cand.tag = Neighborhood::swap21_star;
        cand.r1 = r1;
        cand.r2 = r2;
        cand.p = p;
        cand.q = q;
        cand.y = y;
        cand.side2 = side2;
        if (price_pair(s1, r1, s2, r2, cand)) consider(best, found, cand);
      }
    }
  }
}

void LocalSearch::explore_route_addition(Move& best, bool& found) {
  const int R = static_cast<int>(routes_.size());
  std::vector<std::vector<std::pair<int, int>>> served(inst_.size());
  for (int r = 0; r < R; ++r) {
    if (!active(r)) continue;
    for (int i = 1; i <= routes_[r].size(); ++i) served[routes_[r].nodes[i]].push_back({r, i});
  }
  std::vector<int> spares;
  for (int r = 0; r < R; ++r)
    if (active(r) && routes_[r].empty()) spares.push_back(r);
  for (int c : inst_.customers) {
    if (served[c].size() < 2) continue;
    const int demand = inst_.nodes[c].demand;
    std::vector<std::pair<int, SeqStat>> removed;
    for (const auto& [r, pos] : served[c])
      removed.push_back({r, join(inst_, routes_[r].fwd[pos - 1], routes_[r].bwd[pos + 1])});
    for (int sp : spares) {
      const RouteState& s = routes_[sp];
      if (inst_.fleet[s.vehicle].capacity < demand) continue;
      const SeqStat st =
          join(inst_, join(inst_, s.fwd[0], single(c, demand)), s.bwd[1]);
      auto changed = removed;
      changed.push_back({sp, st});
      Move cand;
      cand.tag = Neighborhood::route_addition;
      cand.r1 = served[c].front().first;
      cand.r2 = sp;
      cand.p = c;
      if (price_many(changed, cand)) consider(best, found, cand);
    }
  }
}

void LocalSearch::explore_k_split(Move& best, bool& found) {
  const int R = static_cast<int>(routes_.size());
  struct Target {
    double cost;
    int route;
    int pos;
    bool merge;
  };
  for (int r = 0; r < R; ++r) {
    if (!active(r) || routes_[r].empty()) continue;
    const RouteState& src = routes_[r];
    for (int p = 1; p <= src.size(); ++p) {
      const int c = src.nodes[p];
      const int qc = src.qty[p];
      const SeqStat rem = join(inst_, src.fwd[p - 1], src.bwd[p + 1]);
      const SeqStat unit = single(c, 1);
      std::vector<Target> targets;
      for (int t = 0; t < R; ++t) {
        if (t == r || !active(t)) continue;
        const RouteState& rt = routes_[t];
        if (!((inst_.nodes[c].allowed >> rt.vehicle) & 1u)) continue;
        if (inst_.fleet[rt.vehicle].capacity - rt.load() <= 0) continue;
        const auto at = std::find(rt.nodes.begin() + 1, rt.nodes.end() - 1, c);
        if (at != rt.nodes.end() - 1) {
          // Already served here: the extra quantity adds no detour.
          targets.push_back({0.0, t, static_cast<int>(at - rt.nodes.begin()), true});
          continue;
        }
        double best_cost = kInf;
        int best_pos = -1;
        for (int j = 0; j <= rt.size(); ++j) {
          const SeqStat s = join(inst_, join(inst_, rt.fwd[j], unit), rt.bwd[j + 1]);
          if (inst_.duration_limit && limited_length(inst_, s) > *inst_.duration_limit + 1e-9)
            continue;
          const double cost = route_cost(s, inst_.fleet[rt.vehicle], opt_.omega) - rt.cost;
          if (cost < best_cost) {
            best_cost = cost;
            best_pos = j;
          }
        }
        if (best_pos >= 0) targets.push_back({best_cost, t, best_pos, false});
      }
      std::stable_sort(targets.begin(), targets.end(),
                       [](const Target& x, const Target& y) { return x.cost < y.cost; });
      int remaining = qc;
      Move cand;
      cand.tag = Neighborhood::k_split;
      cand.r1 = r;
      cand.p = p;
      std::vector<std::pair<int, SeqStat>> changed{{r, rem}};
      for (const Target& t : targets) {
        if (remaining == 0) break;
        const RouteState& rt = routes_[t.route];
        const int take = std::min(remaining, inst_.fleet[rt.vehicle].capacity - rt.load());
        if (take <= 0) continue;
        remaining -= take;
        cand.parts.push_back(SplitPart{t.route, t.pos, take, t.merge});
        if (t.merge)
          changed.push_back({t.route, join(inst_, join(inst_, rt.fwd[t.pos - 1],
                                                       single(c, rt.qty[t.pos] + take)),
                                           rt.bwd[t.pos + 1])});
        else
          changed.push_back(
              {t.route, join(inst_, join(inst_, rt.fwd[t.pos], single(c, take)), rt.bwd[t.pos + 1])});
      }
      if (remaining > 0 || cand.parts.empty()) continue;
      if (price_many(changed, cand)) consider(best, found, cand);
    }
  }
}

}  // namespace hfvrp
