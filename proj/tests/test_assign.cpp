#include <doctest.h>

#include "cns_cases.hpp"
#include "hfvrp/assign.hpp"
#include "oracles.hpp"

using namespace hfvrp;

TEST_CASE("ap_build on two routes and two vehicles") {
  const std::vector<ApRoute> routes = {{5, 10.0}, {5, 20.0}};
  const std::vector<ApVehicle> veh = {{0, 10, 0.0, 1.0}, {1, 10, 0.0, 2.0}};
  const ApInstance ap = ap_build(routes, veh);
  REQUIRE(ap.size == 2);
  CHECK(ap.at(0, 0) == 10.0);
  CHECK(ap.at(0, 1) == 20.0);
  CHECK(ap.at(1, 0) == 20.0);
  CHECK(ap.at(1, 1) == 40.0);
  const ApResult r = hungarian(ap);
  CHECK(r.feasible);
  CHECK(r.cost == 40.0);
  CHECK(r.row_to_col[0] == 1);
  CHECK(r.row_to_col[1] == 0);
  CHECK(oracle::brute_assignment(ap.cost, 2) == 40.0);
}

TEST_CASE("single fitting vehicle and overweight routes") {
  const ApInstance one = ap_build({{5, 3.0}}, {{0, 10, 1.0, 1.0}});
  CHECK(one.size == 1);
  CHECK(one.at(0, 0) == 4.0);
  const ApInstance heavy = ap_build({{50, 3.0}}, {{0, 10, 1.0, 1.0}, {1, 20, 1.0, 1.0}});
  for (int j = 0; j < heavy.size; ++j) CHECK(heavy.at(0, j) == kApSentinel);
  CHECK_FALSE(hungarian(heavy).feasible);
}

TEST_CASE("diagonal-dominant matrix") {
  const std::vector<double> m = {1, 9, 9, 9, 1, 9, 9, 9, 1};
  const ApResult r = hungarian(m, 3);
  CHECK(r.cost == 3.0);
  for (int i = 0; i < 3; ++i) CHECK(r.row_to_col[i] == i);
}

TEST_CASE("hungarian equals permutation enumeration") {
  Rng rng = make_rng(31);
  for (int t = 0; t < 600; ++t) {
    const int n = 2 + t % 6;
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (double& x : m) x = t % 5 == 0 ? uniform_int(rng, 0, 4) : oracle::urand(rng, 0, 100);
    const ApResult r = hungarian(m, n);
    CHECK(oracle::close(r.cost, oracle::brute_assignment(m, n)));
    double sum = 0.0;
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
      sum += m[static_cast<std::size_t>(i) * n + r.row_to_col[i]];
      seen[r.row_to_col[i]] = 1;
    }
    CHECK(oracle::close(sum, r.cost));
    CHECK(std::count(seen.begin(), seen.end(), 1) == n);
  }
}

TEST_CASE("sfr rules") {
  Rng rng = make_rng(2);
  const Instance inst = cns_cases::micro(true, 6, rng);
  RouteEval small;
  small.stat.dist = 30;
  small.stat.peak = small.stat.delivery = 20;
  small.vehicle = 2;
  SUBCASE("no spare vehicles") {
    CHECK_FALSE(sfr(inst, {small}, {0, 0, 0, 0}, 1000).has_value());
  }
  SUBCASE("cheaper sufficient type") {
    const auto re = sfr(inst, {small}, {1, 0, 0, 0}, 1000);
    REQUIRE(re.has_value());
    CHECK(re->vehicles[0] == 0);
    CHECK(re->delta < 0.0);
  }
  SUBCASE("first route takes the only cheap spare") {
    RouteEval other = small;
    const auto re = sfr(inst, {small, other}, {1, 0, 0, 0}, 1000);
    REQUIRE(re.has_value());
    CHECK(re->vehicles[0] == 0);
    CHECK(re->vehicles[1] == 2);
  }
}

TEST_CASE("homogeneous fleet gives the plain delta") {
  Rng rng = make_rng(4);
  Instance inst = cns_cases::micro(true, 8, rng);
  inst.fleet.resize(1);
  inst.fleet[0].count = kUnlimited;
  inst.fleet[0].capacity = 500;
  inst.user_types = 0;
  inst.finalize();
  cns_cases::random_moves(inst, rng, 200, [](const cns_cases::Deltas& d) {
    REQUIRE(d.plain_ok);
    CHECK(oracle::close(d.sfr, d.plain));
    CHECK(oracle::close(d.pda, d.plain));
  });
}

TEST_CASE("pda <= sfr <= plain") {
  Rng rng = make_rng(6);
  for (bool corr : {true, false}) {
    const Instance inst = cns_cases::micro(corr, 9, rng);
    int seen = 0;
    cns_cases::random_moves(inst, rng, 300, [&](const cns_cases::Deltas& d) {
      if (!d.plain_ok) return;
      ++seen;
      REQUIRE(d.sfr_ok);
      REQUIRE(d.pda_ok);
      CHECK(d.sfr <= d.plain + 1e-9);
      CHECK(d.pda <= d.sfr + 1e-9);
    });
    CHECK(seen > 100);
  }
}

TEST_CASE("threshold case flips the vehicle type under pda only") {
  const cns_cases::Threshold t = cns_cases::threshold_case();
  const CnsResult plain = cns_cost(t.inst, t.before, t.after, {0}, CnsMode::off, 1000);
  const CnsResult s = cns_cost(t.inst, t.before, t.after, {0}, CnsMode::sfr, 1000);
  const CnsResult p = cns_cost(t.inst, t.before, t.after, {0}, CnsMode::pda, 1000);
  CHECK(plain.delta == doctest::Approx(80.0));
  CHECK(s.vehicles[0] == 0);
  CHECK(s.delta == doctest::Approx(80.0));
  CHECK(p.vehicles[0] == 1);
  CHECK(p.vehicles[1] == 0);
  // 80 on D (130) and 10 on C (20) against 40 on C and 10 on D (140).
  CHECK(p.delta == doctest::Approx(10.0));
}
