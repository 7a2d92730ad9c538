#include <doctest.h>

#include "hfvrp/eval.hpp"
#include "oracles.hpp"

using namespace hfvrp;

namespace {

// Depot 0 at the origin plus customers from (x, demand, ready, due, service).
struct Spot {
  double x;
  int demand;
  double ready;
  double due;
  double service;
  Role role = Role::linehaul;
};

Instance line(const std::vector<Spot>& spots, int capacity = 100) {
  Instance inst;
  Node dep;
  dep.role = Role::depot;
  inst.nodes.push_back(dep);
  inst.depots.push_back(0);
  for (const Spot& s : spots) {
    Node n;
    n.id = inst.size();
    n.x = s.x;
    n.demand = s.demand;
    n.ready = s.ready;
    n.due = s.due;
    n.service = s.service;
    n.role = s.role;
    if (s.role == Role::backhaul) inst.attributes.backhaul_mixed = true;
    inst.nodes.push_back(n);
    inst.customers.push_back(n.id);
  }
  VehicleType v;
  v.capacity = capacity;
  inst.fleet.push_back(v);
  inst.finalize();
  return inst;
}

}  // namespace

TEST_CASE("singletons") {
  const Instance inst = line({{1, 5, 10, 20, 3}, {2, 5, 0, kInf, 0, Role::backhaul}});
  const SeqStat s = seq_singleton(inst, 1);
  CHECK(s.dist == 0.0);
  CHECK(s.load() == 5);
  CHECK(s.duration == 3.0);
  CHECK(s.earliest == 10.0);
  CHECK(s.latest == 20.0);
  CHECK(s.warp == 0.0);

  const SeqStat d = seq_singleton(inst, 0);
  CHECK(d.load() == 0);
  CHECK(d.duration == inst.nodes[0].service);

  const SeqStat b = seq_singleton(inst, 2);
  CHECK(b.pickup == 5);
  CHECK(b.delivery == 0);
  CHECK(b.peak == 5);
}

TEST_CASE("concatenation of two windows") {
  SeqStat i, j;
  i.earliest = 0;
  i.latest = 10;
  i.duration = 2;
  j.earliest = 20;
  j.latest = 30;
  j.duration = 2;
  const ConcatDeltas c = concat_deltas(i, j, 5.0);
  CHECK(c.delta == 7.0);
  CHECK(c.waiting == 3.0);
  const SeqStat ij = seq_concat(i, j, 5.0);
  CHECK(ij.duration == 12.0);
  CHECK(ij.warp == 0.0);

  j.earliest = 0;
  j.latest = 4;
  CHECK(concat_deltas(i, j, 5.0).warp == 3.0);
  CHECK(seq_concat(i, j, 5.0).warp == 3.0);
}

TEST_CASE("concatenation examples agree with simulation") {
  // i at x=5, j at x=10: d(i, j) = 5.
  const Instance inst = line({{5, 1, 0, 10, 2}, {10, 1, 20, 30, 2}, {10, 1, 0, 4, 2}});
  Rng rng = make_rng(3);
  const SeqStat a = join(inst, seq_singleton(inst, 1), seq_singleton(inst, 2));
  CHECK(oracle::check_stat(inst, {1, 2}, {1, 1}, a, rng).empty());
  CHECK(a.duration == doctest::Approx(12.0));
  const SeqStat b = join(inst, seq_singleton(inst, 1), seq_singleton(inst, 3));
  CHECK(oracle::check_stat(inst, {1, 3}, {1, 1}, b, rng).empty());
  CHECK(b.warp == doctest::Approx(3.0));
}

TEST_CASE("depot singleton is neutral") {
  const Instance inst = line({{3, 4, 5, 50, 1}, {6, 2, 0, 40, 1}});
  const SeqStat s = join(inst, seq_singleton(inst, 1), seq_singleton(inst, 2));
  SeqStat dep;
  dep.latest = kInf;
  const SeqStat t = seq_concat(s, dep, 0.0);
  CHECK(t.dist == s.dist);
  CHECK(t.load() == s.load());
  CHECK(t.warp == s.warp);
  CHECK(t.duration == s.duration);
}

TEST_CASE("route_stat of empty routes") {
  const Instance inst = line({{3, 4, 0, kInf, 0}});
  const SeqStat open = route_stat(inst, 0, {}, true);
  CHECK(open == seq_singleton(inst, 0, 0));
  const SeqStat closed = route_stat(inst, 0, {}, false);
  CHECK(closed == join(inst, seq_singleton(inst, 0, 0), seq_singleton(inst, 0, 0)));
}

TEST_CASE("reversed asymmetric route differs") {
  Rng rng = make_rng(11);
  oracle::RandomSpec spec;
  spec.asymmetric = true;
  spec.customers = 5;
  const Instance inst = oracle::random_instance(spec, rng);
  std::vector<Visit> v;
  for (int c : inst.customers) v.push_back({c, inst.nodes[c].demand});
  const SeqStat f = route_stat(inst, 0, v, false);
  std::reverse(v.begin(), v.end());
  const SeqStat r = route_stat(inst, 0, v, false);
  CHECK(f.dist != r.dist);
}

TEST_CASE("route cost") {
  VehicleType vt;
  vt.fixed_cost = 100;
  vt.var_cost = 2;
  SeqStat s;
  s.dist = 50;
  CHECK(route_cost(s, vt, 1000) == 200.0);
  s.warp = 3;
  CHECK(route_cost(s, vt, 1000) == 3200.0);
}

TEST_CASE("capacity filter boundaries") {
  const Instance inst = line({{1, 6, 0, kInf, 0}, {2, 1, 0, kInf, 0}}, 6);
  const SeqStat exact = route_stat(inst, 0, {{1, 6}}, false);
  CHECK(capacity_filter(exact, 0, inst));
  const SeqStat over = route_stat(inst, 0, {{1, 6}, {2, 1}}, false);
  CHECK_FALSE(capacity_filter(over, 0, inst));
}

TEST_CASE("mixed backhaul peak comes from the load profile") {
  // Deliver 6, pick up 6, interleaved: pickup 2 first gives 8 on board.
  const Instance inst = line({{1, 2, 0, kInf, 0, Role::backhaul},
                              {2, 6, 0, kInf, 0},
                              {3, 4, 0, kInf, 0, Role::backhaul}},
                             6);
  const std::vector<Visit> v = {{1, 2}, {2, 6}, {3, 4}};
  const SeqStat s = route_stat(inst, 0, v, false);
  const oracle::Timeline tl = oracle::simulate(inst, {0, 1, 2, 3, 0}, {0, 2, 6, 4, 0}, 0.0);
  CHECK(s.delivery == 6);
  CHECK(s.pickup == 6);
  CHECK(s.peak == 8);
  CHECK(tl.peak == 8);
  CHECK_FALSE(capacity_filter(s, 0, inst));
}

TEST_CASE("random routes match the timeline simulation") {
  Rng rng = make_rng(2024);
  int checked = 0;
  for (int combo = 0; combo < 64; ++combo) {
    oracle::RandomSpec spec;
    spec.customers = 10;
    spec.time_windows = combo & 1;
    spec.open = combo & 2;
    spec.mixed_backhaul = combo & 4;
    spec.asymmetric = combo & 8;
    spec.depots = (combo & 16) ? 3 : 1;
    spec.split = combo & 32;
    const Instance inst = oracle::random_instance(spec, rng);
    for (int r = 0; r < 20; ++r) {
      std::vector<int> cs = inst.customers;
      hfvrp::shuffle(cs, rng);
      cs.resize(uniform_int(rng, 0, static_cast<int>(cs.size())));
      const int depot = inst.depots[uniform_int(rng, 0, static_cast<int>(inst.depots.size()) - 1)];
      std::vector<Visit> visits;
      std::vector<int> nodes{depot}, qty{0};
      for (int c : cs) {
        const int q = spec.split ? uniform_int(rng, 1, inst.nodes[c].demand) : inst.nodes[c].demand;
        visits.push_back({c, q});
        nodes.push_back(c);
        qty.push_back(q);
      }
      nodes.push_back(depot);
      qty.push_back(0);
      const SeqStat s = route_stat(inst, depot, visits, false);
      const std::string bad = oracle::check_stat(inst, nodes, qty, s, rng);
      CHECK_MESSAGE(bad.empty(), "field " << bad << " combo " << combo);
      ++checked;
    }
  }
  CHECK(checked == 1280);
}

TEST_CASE("concatenation is associative on random splits") {
  Rng rng = make_rng(77);
  oracle::RandomSpec spec;
  spec.customers = 12;
  spec.time_windows = true;
  spec.mixed_backhaul = true;
  const Instance inst = oracle::random_instance(spec, rng);
  for (int r = 0; r < 200; ++r) {
    std::vector<int> cs = inst.customers;
    hfvrp::shuffle(cs, rng);
    std::vector<SeqStat> parts{seq_singleton(inst, 0, 0)};
    for (int c : cs) parts.push_back(seq_singleton(inst, c));
    parts.push_back(seq_singleton(inst, 0, 0));
    SeqStat left = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) left = join(inst, left, parts[i]);
    SeqStat right = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) right = join(inst, parts[i], right);
    const std::size_t cut = 1 + static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(parts.size()) - 2));
    SeqStat a = parts[0], b = parts[cut];
    for (std::size_t i = 1; i < cut; ++i) a = join(inst, a, parts[i]);
    for (std::size_t i = cut + 1; i < parts.size(); ++i) b = join(inst, b, parts[i]);
    SeqStat mid = join(inst, a, b);
    for (const SeqStat* s : {&right, &mid}) {
      CHECK(oracle::close(s->dist, left.dist));
      CHECK(oracle::close(s->duration, left.duration));
      CHECK(oracle::close(s->earliest, left.earliest));
      CHECK(oracle::close(s->latest, left.latest));
      CHECK(oracle::close(s->warp, left.warp));
      CHECK(s->peak == left.peak);
    }
  }
}
