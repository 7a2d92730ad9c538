#include <doctest.h>

#include "hfvrp/construct.hpp"
#include "hfvrp/eval.hpp"
#include "hfvrp/ils.hpp"
#include "hfvrp/io.hpp"
#include "oracles.hpp"

using namespace hfvrp;

namespace {

Instance random_case(std::uint64_t seed, int customers, bool fixed) {
  Rng rng = make_rng(seed);
  oracle::RandomSpec spec;
  spec.customers = customers;
  spec.fixed_fleet = fixed;
  return oracle::random_instance(spec, rng);
}

}  // namespace

TEST_CASE("zero ILS iterations only runs the local search") {
  const Instance inst = random_case(3, 20, false);
  SolverParams p;
  RoutePool pool;
  Rng rng = make_rng(9);
  const Solution s = build_initial(inst, p, rng);
  IlsContext ctx{inst, p, pool};
  const Solution out = ils_rvnd(ctx, s, 0, rng);
  CHECK(ctx.iterations == 0);
  CHECK(out.objective <= s.objective + 1e-9);
  CHECK(pool.temporary_count() >= 1);
}

TEST_CASE("ILS never returns worse than its local search") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Instance inst = random_case(seed, 18, seed % 2);
    SolverParams p;
    RoutePool pool;
    Rng a = make_rng(seed, 1), b = make_rng(seed, 1);
    const Solution s = build_initial(inst, p, a);
    build_initial(inst, p, b);
    IlsContext c0{inst, p, pool};
    const Solution ls = ils_rvnd(c0, s, 0, a);
    IlsContext c1{inst, p, pool};
    const Solution ils = ils_rvnd(c1, s, 20, b);
    CHECK(c1.iterations >= 20);
    CHECK(ils.objective <= ls.objective + 1e-9);
    CHECK(oracle::close(ils.objective, recompute_objective(inst, ils, p.omega)));
  }
}

TEST_CASE("iteration count default") {
  const Instance inst = random_case(4, 20, true);
  int v = 0;
  for (int k = 0; k < inst.user_types; ++k) v += inst.fleet[k].count;
  CHECK(default_iils(inst, Solution{}) == 20 + 5 * v);
  const Instance open = random_case(4, 20, false);
  Rng rng = make_rng(1);
  const Solution s = build_initial(open, SolverParams{}, rng);
  int used = 0;
  for (const Route& r : s.routes) used += !r.empty();
  CHECK(default_iils(open, s) == 20 + 5 * used);
}

TEST_CASE("same seed, same run") {
  const Instance inst = random_case(11, 25, false);
  SolverParams p;
  p.ims = 3;
  p.seed = 42;
  p.n_large = 10;
  const HilsResult a = hils(inst, p);
  const HilsResult b = hils(inst, p);
  CHECK(a.report.fingerprint() == b.report.fingerprint());
  CHECK(write_solution(inst, a.best) == write_solution(inst, b.best));
  p.seed = 43;
  const HilsResult c = hils(inst, p);
  CHECK(c.report.restarts.size() == 3);
  for (const RestartTrace& t : a.report.restarts) {
    CHECK(t.after_ils <= t.initial + 1e-9);
    CHECK(t.after_sp <= t.after_ils + 1e-9);
    CHECK(t.sp_called);
  }
  CHECK(a.report.best_objective <= a.report.restarts.front().after_sp + 1e-9);
}

TEST_CASE("a single customer") {
  const Instance inst = parse_canonical(R"(NAME one
ATTRIBUTES none
DEPOTS 1
CUSTOMERS 1
DURATION_LIMIT none duration
VEHICLES
0 10 5 1 -1
1 20 9 0.5 -1
NODES
0 0 0 0 0 inf 0 depot
1 3 4 2 0 inf 0 linehaul
END
)");
  SolverParams p;
  p.ims = 2;
  const HilsResult r = hils(inst, p);
  REQUIRE(r.best.routes.size() == 1);
  CHECK(r.best.objective == doctest::Approx(std::min(5.0 + 10.0, 9.0 + 5.0)));
  CHECK(r.report.feasible);
}

TEST_CASE("split deliveries run without the set partitioning stage") {
  const Instance inst = load_instance(std::string(HFVRP_DATA_DIR) + "/golden_taillard/c50_13hvrp.txt",
                                      ClassicFormat::golden_taillard, Variant::hffvrpsd);
  SolverParams p;
  p.ims = 2;
  p.iils = 15;
  const HilsResult r = hils(inst, p);
  CHECK(r.report.sp_solves == 0);
  for (const RestartTrace& t : r.report.restarts) CHECK_FALSE(t.sp_called);
  const ValidationReport rep = validate_solution(inst, r.best, p.omega);
  CHECK_MESSAGE(rep.hard_clean(), rep.to_string());
  const oracle::CheckResult chk = oracle::check_solution(inst, r.best, p.omega);
  CHECK(chk.problems.empty());
  CHECK(oracle::close(chk.objective, r.best.objective));
}

TEST_CASE("time limit stops the run") {
  const Instance inst = random_case(5, 60, false);
  SolverParams p;
  p.ims = 1000;
  p.time_limit = 0.5;
  const HilsResult r = hils(inst, p);
  CHECK(r.report.time_limited);
  CHECK(r.report.restarts.size() < 1000);
  CHECK(r.report.wall_seconds < 5.0);
  REQUIRE_FALSE(r.report.restarts.empty());
  CHECK(r.report.restarts.back().sp_called);
  CHECK(validate_solution(inst, r.best, p.omega).hard_clean());
}
