#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hfvrp/bks.hpp"
#include "hfvrp/eval.hpp"
#include "hfvrp/io.hpp"
#include "oracles.hpp"

using namespace hfvrp;

namespace {

std::string data(const std::string& rel) { return std::string(HFVRP_DATA_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("minimal canonical document") {
  const Instance inst = parse_canonical(R"(NAME tiny
ATTRIBUTES none
DEPOTS 1
CUSTOMERS 1
DURATION_LIMIT none duration
VEHICLES
0 10 5 1 -1
NODES
0 0 0 0 0 inf 0 depot
1 3 4 2 0 inf 0 linehaul
END
)");
  CHECK(inst.num_customers() == 1);
  CHECK(inst.num_types() == 1);
  CHECK(inst.d(0, 1) == doctest::Approx(5.0));
}

TEST_CASE("canonical round trip on random instances") {
  Rng rng = make_rng(99);
  for (int t = 0; t < 120; ++t) {
    oracle::RandomSpec spec;
    spec.customers = uniform_int(rng, 1, 15);
    spec.depots = uniform_int(rng, 1, 3);
    spec.types = uniform_int(rng, 1, 4);
    spec.open = t & 1;
    spec.time_windows = t & 2;
    spec.site_dependency = t & 4;
    spec.asymmetric = t & 8;
    spec.split = t & 16;
    spec.fixed_fleet = t & 32;
    spec.duration_limit = t & 64;
    if (t % 3 == 1) spec.strict_backhaul = true;
    if (t % 3 == 2) spec.mixed_backhaul = true;
    const Instance inst = oracle::random_instance(spec, rng);
    const std::string text = write_canonical(inst);
    const Instance back = parse_canonical(text);
    CHECK(back.same_source(inst));
    CHECK(write_canonical(back) == text);
  }
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_canonical("NAME x\nDEPOTS one\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_canonical("BOGUS 1\n"), ParseError);
}

TEST_CASE("Taillard 13 as a fixed fleet") {
  const std::string path = data("golden_taillard/c50_13hvrp.txt");
  const Instance inst = load_instance(path, ClassicFormat::golden_taillard, Variant::hffvrp_v);
  CHECK(inst.num_customers() == 50);
  CHECK(inst.user_types == 6);
  CHECK(inst.fixed_fleet());

  // Independent read of the raw file: n, n+1 node rows, type count, types.
  std::istringstream raw(read_file(path));
  int n = 0;
  raw >> n;
  int demand = 0;
  for (int i = 0; i <= n; ++i) {
    int id = 0, q = 0;
    double x = 0, y = 0;
    raw >> id >> x >> y >> q;
    demand += q;
  }
  int types = 0;
  raw >> types;
  CHECK(types == inst.user_types);
  int fleet_units = 0;
  for (int k = 0; k < types; ++k) {
    int cap = 0, count = 0;
    double fixed = 0, var = 0, unused = 0;
    raw >> cap >> fixed >> var >> unused >> count;
    CHECK(inst.fleet[k].capacity == cap);
    CHECK(inst.fleet[k].count == count);
    CHECK(inst.fleet[k].var_cost == doctest::Approx(var));
    fleet_units += count;
  }
  CHECK(demand == inst.total_demand);
  CHECK(fleet_units == 4 + 2 + 4 + 4 + 2 + 1);

  const Instance canon = parse_canonical(write_canonical(inst));
  CHECK(canon.num_customers() == 50);
}

TEST_CASE("Solomon C101 with fleet A") {
  const Instance inst = load_instance(data("solomon/C101.txt"), ClassicFormat::solomon_fsmtw,
                                      Variant::fsmvrptw_dist, 'A');
  CHECK(inst.num_customers() == 100);
  CHECK(inst.attributes.time_windows);
  for (int k = 0; k < inst.user_types; ++k) CHECK(inst.fleet[k].unlimited());
  CHECK_FALSE(inst.has_extra());
}

TEST_CASE("Cordeau p01 keeps its depots") {
  const std::string path = data("cordeau_md/p01.txt");
  std::istringstream raw(read_file(path));
  int type = 0, m = 0, n = 0, t = 0;
  raw >> type >> m >> n >> t;
  const Instance inst = load_instance(path, ClassicFormat::cordeau_md, std::nullopt);
  CHECK(static_cast<int>(inst.depots.size()) == t);
  CHECK(inst.num_customers() == n);
  const Instance canon = parse_canonical(write_canonical(inst));
  CHECK(canon.depots.size() == inst.depots.size());
}

TEST_CASE("best known values") {
  CHECK(*bks_lookup("13", "HFFOVRP-V") == doctest::Approx(981.32));
  CHECK(*bks_lookup("N1", "HFFVRP-V") == doctest::Approx(2235.87));
  CHECK(*bks_lookup("HWS1", "FSMVRPB") == doctest::Approx(720.57));
  CHECK(*bks_lookup("13", "HFFOVRP-FV") == doctest::Approx(2588.65));
  CHECK(*bks_lookup("14", "HFFOVRP-FV") == doctest::Approx(9961.81));
  CHECK_FALSE(bks_lookup("13", "NOPE").has_value());
  const BksRegistry r = BksRegistry::from_text("# c\nA\tX\t1.5\tT1\n");
  CHECK(r.entries().size() == 1);
  CHECK(*r.lookup("A", "X") == 1.5);
}

TEST_CASE("variant names") {
  for (const char* s : {"FSMVRP-F", "HFFOVRP-FV", "HFFVRPSD", "FSMVRPTW-DIST", "HFFVRPMBTW"}) {
    const auto v = variant_from_string(s);
    REQUIRE(v.has_value());
    CHECK(std::string(to_string(*v)) == s);
  }
  CHECK_FALSE(variant_from_string("VRP").has_value());
}

TEST_CASE("strict backhaul order is checked") {
  const Instance inst = parse_canonical(R"(NAME bh
ATTRIBUTES backhaul_strict
DEPOTS 1
CUSTOMERS 2
DURATION_LIMIT none duration
VEHICLES
0 10 0 1 -1
NODES
0 0 0 0 0 inf 0 depot
1 1 0 3 0 inf 0 linehaul
2 2 0 3 0 inf 0 backhaul
END
)");
  const Solution bad = parse_solution(inst, "ROUTE 0 0 : 2 1\n", 1000);
  CHECK(validate_solution(inst, bad, 1000).has(ViolationKind::backhaul_order));
  const Solution good = parse_solution(inst, "ROUTE 0 0 : 1 2\n", 1000);
  CHECK_FALSE(validate_solution(inst, good, 1000).has(ViolationKind::backhaul_order));
}

TEST_CASE("solution file round trip with split quantities") {
  const Instance inst = load_instance(data("golden_taillard/c50_13hvrp.txt"), ClassicFormat::golden_taillard,
                                      Variant::hffvrpsd);
  Solution sol;
  const int c = inst.customers[0];
  const int q = inst.nodes[c].demand;
  sol.routes.push_back(make_route(inst, 0, 0, {{c, q - 1}}, 1000));
  sol.routes.push_back(make_route(inst, 0, 1, {{c, 1}}, 1000));
  refresh(inst, sol, 1000);
  const std::string text = write_solution(inst, sol);
  CHECK(text.find(std::to_string(c) + ":1") != std::string::npos);
  const Solution back = parse_solution(inst, text, 1000);
  REQUIRE(back.routes.size() == 2);
  CHECK(back.routes[0].visits[0].quantity == q - 1);
  CHECK(write_solution(inst, back) == text);
  CHECK_THROWS_AS(parse_solution(inst, "ROUTE 0 0 : 999\n", 1000), StructuralError);
  CHECK_THROWS_AS(parse_solution(inst, "ROUTE 0 0 1\n", 1000), ParseError);
}

TEST_CASE("Taillard files take the registry name") {
  const Instance inst = load_instance(std::string(HFVRP_DATA_DIR) + "/golden_taillard/c100_19fsmd.txt",
                                      ClassicFormat::golden_taillard, Variant::fsmvrp_v);
  CHECK(inst.name == "19");
  CHECK(bks_lookup(inst.name, "HFFOVRP-V").has_value());
}
