// Acceptance checks, one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance --only 4   run one

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

#include "cns_cases.hpp"
#include "hfvrp/assign.hpp"
#include "hfvrp/bench.hpp"
#include "hfvrp/bks.hpp"
#include "hfvrp/eval.hpp"
#include "hfvrp/ils.hpp"
#include "hfvrp/io.hpp"
#include "hfvrp/setpart.hpp"
#include "oracles.hpp"
#include "sp_cases.hpp"

using namespace hfvrp;

namespace {

const std::string kData = HFVRP_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every combination of the attributes that reach the sequence statistics,
// strict and mixed backhauls excluded together.
Outcome seqstat_oracle() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(20240601);
  long routes = 0, mismatches = 0;
  std::string first_bad;
  for (int combo = 0; combo < 256; ++combo) {
    for (int strict = 0; strict < 2; ++strict) {
      oracle::RandomSpec spec;
      spec.customers = 12;
      spec.time_windows = combo & 1;
      spec.open = combo & 2;
      spec.mixed_backhaul = (combo & 4) && !strict;
      spec.strict_backhaul = strict;
      spec.asymmetric = combo & 8;
      spec.depots = (combo & 16) ? 3 : 1;
      spec.split = combo & 32;
      spec.duration_limit = combo & 64;
      spec.site_dependency = combo & 128;
      if (strict && (combo & 4)) continue;
      const Instance inst = oracle::random_instance(spec, rng);
      for (int r = 0; r < 27; ++r) {
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
        // Built by concatenating random chunks rather than in one pass.
        SeqStat s = seq_singleton(inst, depot);
        std::size_t i = 0;
        while (i < visits.size()) {
          const std::size_t len = static_cast<std::size_t>(uniform_int(rng, 1, 4));
          SeqStat chunk = seq_singleton(inst, visits[i].customer, visits[i].quantity);
          for (std::size_t j = i + 1; j < std::min(visits.size(), i + len); ++j)
            chunk = join(inst, chunk, seq_singleton(inst, visits[j].customer, visits[j].quantity));
          s = join(inst, s, chunk);
          i = std::min(visits.size(), i + len);
        }
        s = join(inst, s, seq_singleton(inst, depot));
        ++routes;
        std::string bad = oracle::check_stat(inst, nodes, qty, s, rng);
        if (bad.empty()) bad = oracle::check_stat(inst, nodes, qty, route_stat(inst, depot, visits, false), rng);
        if (!bad.empty()) {
          ++mismatches;
          if (first_bad.empty()) first_bad = bad + " (combo " + std::to_string(combo) + ")";
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = routes >= 10000 && mismatches == 0 && secs < 10.0;
  o.detail = std::to_string(routes) + " routes, " + std::to_string(mismatches) + " mismatches" +
             (first_bad.empty() ? "" : " first " + first_bad) + ", " + fmt("%.2f", secs) + " s (limit 10 s)";
  return o;
}

Outcome assignment_exactness() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(777);
  int count = 0, mismatches = 0;
  for (int n = 2; n <= 7; ++n) {
    for (int t = 0; t < 200; ++t) {
      std::vector<double> m(static_cast<std::size_t>(n) * n);
      for (double& x : m) x = t % 4 == 0 ? uniform_int(rng, 0, 5) : oracle::urand(rng, 0, 1000);
      const ApResult r = hungarian(m, n);
      ++count;
      if (!r.feasible || !oracle::close(r.cost, oracle::brute_assignment(m, n))) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = count >= 1000 && mismatches == 0 && secs < 5.0;
  o.detail = std::to_string(count) + " matrices 2x2..7x7, " + std::to_string(mismatches) + " mismatches, " +
             fmt("%.2f", secs) + " s (limit 5 s)";
  return o;
}

Outcome sp_exactness() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(4242);
  int count = 0, mismatches = 0;
  for (int t = 0; t < 300; ++t) {
    const int rows = 3 + t % 6;
    const int cols = 8 + t % 13;
    sp_cases::Case c = sp_cases::random_case(rng, rows, cols, 1 + t % 3, t % 7 == 6);
    const double want = oracle::enumerate_cover(c.model.rows, c.cols, c.limit);
    const SpResult r = sp_branch_and_bound(c.model, {});
    ++count;
    const bool ok = r.complete && (want == kInf ? !r.found : r.found && oracle::close(r.cost, want));
    if (!ok) ++mismatches;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = count >= 100 && mismatches == 0 && secs < 30.0;
  o.detail = std::to_string(count) + " pools (<= 8 customers, <= 20 columns), " + std::to_string(mismatches) +
             " mismatches, " + fmt("%.2f", secs) + " s (limit 30 s)";
  return o;
}

// Reduced per-run budget; the full default budget needs hours per grid on
// one core.
SolverParams calibration_budget() {
  SolverParams p;
  p.ims = 2;
  p.iils = 20;
  p.tmax = 2.0;
  return p;
}

Outcome omega_calibration_check() {
  const auto t0 = Clock::now();
  const char* names[] = {"C101", "C102", "C103", "R101", "R102", "R103", "RC101", "RC102", "RC103", "C201"};
  std::vector<Instance> insts;
  for (const char* n : names)
    insts.push_back(load_instance(kData + "/solomon/" + n + ".txt", ClassicFormat::solomon_fsmtw,
                                  Variant::fsmvrptw_dist, 'A'));
  const std::vector<double> grid = {1, 10, 100, 1000};
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
  const OmegaTable t = omega_calibration(insts, grid, seeds, calibration_budget(), 1);
  std::printf("%s", render_omega_table(t).c_str());
  bool full = true, monotone = true;
  for (const OmegaRow& r : t.rows) {
    if (r.rates.back() < 1.0) full = false;
    int inversions = 0;
    for (std::size_t g = 1; g < r.rates.size(); ++g)
      if (r.rates[g] < r.rates[g - 1]) ++inversions;
    if (inversions > 1) monotone = false;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = full && monotone && secs < 1800.0;
  o.detail = std::to_string(insts.size()) + " FSMTW instances x 10 seeds, feasible at w=1000: " +
             fmt("%.1f%%", 100.0 * t.overall.back()) + (monotone ? ", monotone" : ", >1 inversion") +
             " (ims=2, iils=20), " + fmt("%.0f", secs) + " s (limit 1800 s)";
  return o;
}

std::vector<ManifestEntry> taillard_manifest(int first, int last, const std::string& extra) {
  std::string text;
  for (int i = first; i <= last; ++i)
    text += "golden_taillard/c" + std::string(i <= 16 ? "50" : i <= 18 ? "75" : "100") + "_" + std::to_string(i) +
            "hvrp.txt HFFOVRP-FV format=golden_taillard " + extra + "\n";
  return parse_manifest(text, kData);
}

Outcome taillard_quality() {
  const auto t0 = Clock::now();
  const auto manifest = taillard_manifest(13, 20, "seeds=1-10 time_limit=120");
  const Experiment ex = run_experiment(manifest, 1, BksRegistry::load_default(), [](const RunReport& r) {
    std::printf("  %s seed %llu: %.2f in %.1f s\n", r.instance.c_str(), static_cast<unsigned long long>(r.seed),
                r.best_objective, r.wall_seconds);
    std::fflush(stdout);
  });
  std::printf("%s", render_gap_table(ex.table).c_str());
  bool each = ex.table.counted == 8;
  double worst = -kInf;
  for (const GapRow& r : ex.table.rows) {
    if (r.flagged || r.best_gap > 1.0 || r.feasible_runs == 0) each = false;
    worst = std::max(worst, r.best_gap);
  }
  Outcome o;
  o.pass = each && ex.table.avg_best_gap <= 0.5;
  o.detail = "Taillard 13-20 HFFOVRP-FV, worst best gap " + fmt("%.2f%%", worst) + " (limit 1.00%), average " +
             fmt("%.2f%%", ex.table.avg_best_gap) + " (limit 0.50%), " + fmt("%.0f", seconds_since(t0)) + " s";
  return o;
}

Outcome backhaul_optima() {
  const auto t0 = Clock::now();
  const std::filesystem::path dir = kData + "/hws";
  std::vector<std::string> missing;
  std::string manifest;
  for (int i = 1; i <= 12; ++i) {
    const std::string name = "HWS" + std::to_string(i);
    const auto file = dir / (name + ".txt");
    if (!std::filesystem::exists(file)) missing.push_back(name);
    else manifest += file.string() + " FSMVRPB name=" + name + " seeds=1-10\n";
  }
  Outcome o;
  if (!missing.empty()) {
    o.detail = "instance files not available (" + std::to_string(missing.size()) + " of 12 missing under " +
               dir.string() + ")";
    return o;
  }
  const Experiment ex = run_experiment(parse_manifest(manifest), 1, BksRegistry::load_default());
  std::printf("%s", render_gap_table(ex.table).c_str());
  int matched = 0;
  for (const GapRow& r : ex.table.rows)
    if (!r.flagged && r.best_gap <= 0.1) ++matched;
  const double secs = seconds_since(t0);
  o.pass = matched >= 10 && secs < 300.0;
  o.detail = std::to_string(matched) + " of 12 within 0.1% (need 10), " + fmt("%.0f", secs) + " s (limit 300 s)";
  return o;
}

Outcome single_row() {
  const auto manifest = parse_manifest(
      "golden_taillard/c50_13hvrp.txt HFFOVRP-V format=golden_taillard seeds=1-2 ims=3\n", kData);
  const Experiment ex = run_experiment(manifest, 1, BksRegistry::load_default());
  const std::string table = render_gap_table(ex.table);
  std::printf("%s", table.c_str());
  Outcome o;
  if (ex.table.rows.size() != 1 || !ex.table.rows[0].bks) {
    o.detail = "row missing or without BKS";
    return o;
  }
  const GapRow& r = ex.table.rows[0];
  const std::string best_gap = fmt("%.2f", gap_percent(r.best, *r.bks));
  const std::string avg_gap = fmt("%.2f", gap_percent(r.avg, *r.bks));
  const bool formatted = table.find("981.32") != std::string::npos && table.find(best_gap) != std::string::npos &&
                         table.find(avg_gap) != std::string::npos;
  o.pass = formatted && r.runs == 2 && *r.bks == 981.32;
  o.detail = "13 HFFOVRP-V: BKS 981.32, best " + fmt("%.2f", r.best) + " gap " + best_gap + ", avg gap " + avg_gap;
  return o;
}

Outcome determinism() {
  struct Job {
    std::string path;
    ClassicFormat format;
    Variant variant;
    SolverParams params;
  };
  std::vector<Job> jobs;
  SolverParams a;
  a.ims = 3;
  a.seed = 5;
  jobs.push_back({kData + "/golden_taillard/c50_13hvrp.txt", ClassicFormat::golden_taillard, Variant::hffovrp_fv, a});
  SolverParams b = calibration_budget();
  b.seed = 9;
  b.omega = 10;
  jobs.push_back({kData + "/solomon/R101.txt", ClassicFormat::solomon_fsmtw, Variant::fsmvrptw_dist, b});
  SolverParams c;
  c.ims = 2;
  c.iils = 20;
  c.cns = CnsMode::pda;
  jobs.push_back({kData + "/cordeau_md/p01.txt", ClassicFormat::cordeau_md, Variant::mdfsmvrp, c});
  SolverParams d;
  d.ims = 2;
  d.iils = 20;
  jobs.push_back({kData + "/golden_taillard/c50_13hvrp.txt", ClassicFormat::golden_taillard, Variant::hffvrpsd, d});
  int same = 0;
  for (const Job& j : jobs) {
    const Instance inst = load_instance(j.path, j.format, j.variant);
    const HilsResult r1 = hils(inst, j.params);
    const HilsResult r2 = hils(inst, j.params);
    const bool bits = std::memcmp(&r1.best.objective, &r2.best.objective, sizeof(double)) == 0;
    if (bits && write_solution(inst, r1.best) == write_solution(inst, r2.best) &&
        r1.report.fingerprint() == r2.report.fingerprint())
      ++same;
  }
  Outcome o;
  o.pass = same == static_cast<int>(jobs.size());
  o.detail = std::to_string(same) + " of " + std::to_string(jobs.size()) +
             " (instance, params, seed) pairs bit-identical across two runs";
  return o;
}

Outcome cns_sanity() {
  Rng rng = make_rng(99);
  long moves = 0, violations = 0;
  for (bool corr : {true, false}) {
    for (int size : {6, 9, 12}) {
      const Instance inst = cns_cases::micro(corr, size, rng);
      cns_cases::random_moves(inst, rng, 400, [&](const cns_cases::Deltas& d) {
        if (!d.plain_ok) return;
        ++moves;
        if (!d.sfr_ok || !d.pda_ok || d.sfr > d.plain + 1e-9 || d.pda > d.sfr + 1e-9) ++violations;
      });
    }
  }
  const cns_cases::Threshold t = cns_cases::threshold_case();
  const CnsResult sfr = cns_cost(t.inst, t.before, t.after, {0}, CnsMode::sfr, 1000);
  const CnsResult pda = cns_cost(t.inst, t.before, t.after, {0}, CnsMode::pda, 1000);
  const bool flips = pda.vehicles[0] == 1 && sfr.vehicles[0] == 0 && pda.delta < sfr.delta;
  Outcome o;
  o.pass = moves > 0 && violations == 0 && flips;
  o.detail = std::to_string(moves) + " moves, " + std::to_string(violations) +
             " order violations; threshold case " + (flips ? "flips to the cheaper-per-km type" : "does not flip");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "criterion number (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"seqstat oracle", seqstat_oracle},   {"assignment exactness", assignment_exactness},
      {"sp exactness", sp_exactness},       {"omega calibration", omega_calibration_check},
      {"taillard quality", taillard_quality}, {"backhaul optima", backhaul_optima},
      {"single row gap", single_row},       {"determinism", determinism},
      {"cns sanity", cns_sanity},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only && id != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
