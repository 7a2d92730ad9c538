#include <algorithm>

#include "hfvrp/eval.hpp"
#include "hfvrp/search.hpp"

namespace hfvrp {

namespace {

constexpr double kEps = 1e-6;

}  // namespace

std::optional<Move> LocalSearch::explore_intra(IntraNeighborhood nb, int route) {
  const RouteState& r = routes_[route];
  const int n = r.size();
  Move best;
  best.delta = -kEps;
  bool found = false;
  auto offer = [&](const SeqStat& s, int p, int q, int k) {
    ++stats_.evaluations;
    const double c = route_cost_on(s, r.vehicle);
    if (c == kInf) return;
    const double delta = c - r.cost;
    if (delta < best.delta) {
      best.intra = nb;
      best.r1 = route;
      best.p = p;
      best.q = q;
      best.k = k;
      best.delta = delta;
      best.v1 = r.vehicle;
      found = true;
    }
  };
  switch (nb) {
    case IntraNeighborhood::reinsertion:
    case IntraNeighborhood::or_opt2:
    case IntraNeighborhood::or_opt3: {
      const int len = nb == IntraNeighborhood::reinsertion ? 1
                      : nb == IntraNeighborhood::or_opt2   ? 2
                                                           : 3;
      for (int p = 1; p + len - 1 <= n; ++p) {
        const SeqStat seg = segment(r, p, p + len - 1);
        if (p >= 2) {
          SeqStat mid = single(r.nodes[p - 1], r.qty[p - 1]);
          for (int j = p - 2; j >= 0; --j) {
            const SeqStat s =
                join(inst_, join(inst_, join(inst_, r.fwd[j], seg), mid), r.bwd[p + len]);
            offer(s, p, j, len);
            if (j > 0) mid = join(inst_, single(r.nodes[j], r.qty[j]), mid);
          }
        }
        if (p + len <= n) {
          SeqStat mid = single(r.nodes[p + len], r.qty[p + len]);
          for (int j = p + len; j <= n; ++j) {
            const SeqStat s =
                join(inst_, join(inst_, join(inst_, r.fwd[p - 1], mid), seg), r.bwd[j + 1]);
            offer(s, p, j, len);
            if (j + 1 <= n) mid = join(inst_, mid, single(r.nodes[j + 1], r.qty[j + 1]));
          }
        }
      }
      break;
    }
    case IntraNeighborhood::two_opt: {
      for (int i = 1; i < n; ++i) {
        SeqStat rev = single(r.nodes[i], r.qty[i]);
        for (int j = i + 1; j <= n; ++j) {
          rev = join(inst_, single(r.nodes[j], r.qty[j]), rev);
          const SeqStat s = join(inst_, join(inst_, r.fwd[i - 1], rev), r.bwd[j + 1]);
          offer(s, i, j, 0);
        }
      }
      break;
    }
    case IntraNeighborhood::exchange: {
      for (int p = 1; p < n; ++p) {
        const SeqStat sp = single(r.nodes[p], r.qty[p]);
        const SeqStat head = r.fwd[p - 1];
        SeqStat mid;
        for (int q = p + 1; q <= n; ++q) {
          const SeqStat sq = single(r.nodes[q], r.qty[q]);
          SeqStat s;
          if (q == p + 1) {
            s = join(inst_, join(inst_, join(inst_, head, sq), sp), r.bwd[q + 1]);
          } else {
            s = join(inst_, join(inst_, join(inst_, join(inst_, head, sq), mid), sp), r.bwd[q + 1]);
          }
          offer(s, p, q, 0);
          mid = q == p + 1 ? sq : join(inst_, mid, sq);
        }
      }
      break;
    }
  }
  if (!found) return std::nullopt;
  return best;
}

void LocalSearch::apply_intra(const Move& m) {
  const double before = objective();
  RouteState& r = routes_[m.r1];
  std::vector<int> nn = r.nodes, nq = r.qty;
  switch (*m.intra) {
    case IntraNeighborhood::reinsertion:
    case IntraNeighborhood::or_opt2:
    case IntraNeighborhood::or_opt3: {
      std::vector<int> sn(nn.begin() + m.p, nn.begin() + m.p + m.k);
      std::vector<int> sq(nq.begin() + m.p, nq.begin() + m.p + m.k);
      nn.erase(nn.begin() + m.p, nn.begin() + m.p + m.k);
      nq.erase(nq.begin() + m.p, nq.begin() + m.p + m.k);
      const int at = (m.q < m.p ? m.q : m.q - m.k) + 1;
      nn.insert(nn.begin() + at, sn.begin(), sn.end());
      nq.insert(nq.begin() + at, sq.begin(), sq.end());
      break;
    }
    case IntraNeighborhood::two_opt:
      std::reverse(nn.begin() + m.p, nn.begin() + m.q + 1);
      std::reverse(nq.begin() + m.p, nq.begin() + m.q + 1);
      break;
    case IntraNeighborhood::exchange:
      std::swap(nn[m.p], nn[m.q]);
      std::swap(nq[m.p], nq[m.q]);
      break;
  }
  set_visits(m.r1, nn, nq);
  ++stats_.intra_moves;
  if (opt_.check_moves) check_delta(before, m);
}

bool LocalSearch::intra_rvnd(int route, Rng& rng) {
  bool improved = false;
  std::vector<IntraNeighborhood> list = set_.intra;
  while (!list.empty()) {
    const int pick = uniform_int(rng, 0, static_cast<int>(list.size()) - 1);
    auto m = explore_intra(list[pick], route);
    if (!m) {
      list.erase(list.begin() + pick);
      continue;
    }
    apply_intra(*m);
    improved = true;
    list = set_.intra;
  }
  return improved;
}

}  // namespace hfvrp
