#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hfvrp/bench.hpp"
#include "hfvrp/bks.hpp"
#include "hfvrp/ils.hpp"
#include "hfvrp/io.hpp"
#include "hfvrp/model.hpp"

using namespace hfvrp;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;

struct Source {
  std::string path;
  std::string format;
  std::string variant;
  std::string fleet = "A";
  std::string name;

  void add(CLI::App* app, bool required = true) {
    auto* opt = app->add_option("--instance", path, "instance file");
    if (required) opt->required();
    app->add_option("--format", format, "classic format: golden_taillard, solomon_fsmtw, cordeau_md");
    app->add_option("--variant", variant, "variant tag, e.g. HFFOVRP-FV");
    app->add_option("--fleet", fleet, "fleet block for solomon_fsmtw (A, B or C)");
    app->add_option("--name", name, "instance name for BKS lookup");
  }

  Instance load() const {
    std::optional<ClassicFormat> f;
    if (!format.empty() && format != "canonical") {
      f = classic_format_from_string(format);
      if (!f) throw ParseError(0, 0, "unknown format " + format);
    }
    std::optional<Variant> v;
    if (!variant.empty()) {
      v = variant_from_string(variant);
      if (!v) throw ParseError(0, 0, "unknown variant " + variant);
    }
    if (fleet.size() != 1) throw ParseError(0, 0, "fleet must be one letter");
    Instance inst = load_instance(path, f, v, fleet[0]);
    if (!name.empty()) inst.name = name;
    return inst;
  }
};

struct ParamFlags {
  std::vector<std::pair<std::string, std::string>> set;

  void add(CLI::App* app) {
    const std::pair<const char*, const char*> keys[] = {
        {"ims", "restarts (default 30)"},
        {"iils", "non-improving ILS iterations (default n + 5v)"},
        {"tmax", "seconds per SP solve (default 30)"},
        {"rgap", "root gap above which the SP fleet is pinned (default 0.02)"},
        {"n-large", "customer count from which SP runs every restart (default 150)"},
        {"omega", "time-warp penalty (default 1000)"},
        {"seed", "RNG seed (default 1)"},
        {"cns", "fleet reassignment during search: off, sfr, pda"},
        {"merge", "Merge perturbation: on, off"},
        {"sp", "set partitioning stage: on, off"},
        {"pool-gap", "pool admission gap (default 0.10)"},
        {"pool-cap", "pool size cap (default 50000)"},
        {"time-limit", "wall-clock cap per run, seconds"},
        {"sp-node-limit", "B&B node cap per SP solve"},
    };
    for (const auto& [key, help] : keys) {
      const std::string k = key;
      app->add_option_function<std::string>(
          "--" + k, [this, k](const std::string& v) { set.emplace_back(k, v); }, help);
    }
  }

  SolverParams build() const {
    SolverParams p;
    for (const auto& [k, v] : set) set_param(p, k, v);
    p.check();
    return p;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string report_text(const RunReport& r) {
  std::string s;
  s += "instance " + r.instance + "\n";
  if (!r.variant.empty()) s += "variant " + r.variant + "\n";
  s += "seed " + std::to_string(r.seed) + "\n";
  s += "objective " + format_double(r.best_objective) + "\n";
  s += std::string("feasible ") + (r.feasible ? "yes" : "no") + "\n";
  s += "time_warp " + format_double(r.tw_violation) + "\n";
  s += "fleet";
  for (int f : r.fleet) s += " " + std::to_string(f);
  s += "\n";
  s += "restarts " + std::to_string(r.restarts.size()) + "\n";
  s += "ils_iterations " + std::to_string(r.ils_iterations) + "\n";
  s += "sp_solves " + std::to_string(r.sp_solves) + "\n";
  s += "seconds " + format_double(r.wall_seconds) + "\n";
  return s;
}

int cmd_solve(const Source& src, const ParamFlags& pf, bool print_params, const std::string& out) {
  const SolverParams params = pf.build();
  if (print_params) {
    std::cout << describe_params(params);
    return 0;
  }
  const Instance inst = src.load();
  if (params.cns == CnsMode::pda && inst.num_customers() > 100)
    std::cerr << "warning: --cns pda solves a full assignment per move; expect long run times on "
              << inst.num_customers() << " customers\n";
  HilsResult res = hils(inst, params);
  if (!src.variant.empty()) res.report.variant = to_string(*variant_from_string(src.variant));
  const std::string sol = write_solution(inst, res.best);
  if (out.empty()) {
    std::cout << sol;
  } else {
    write_text(out, sol);
    write_text(out + ".report", report_text(res.report));
  }
  std::cerr << report_text(res.report);
  if (!res.report.variant.empty()) {
    if (auto b = BksRegistry::load_default().lookup(inst.name, res.report.variant)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "gap %.2f%% (BKS %.2f)\n", gap_percent(res.report.best_objective, *b),
                    *b);
      std::cerr << buf;
    }
  }
  return res.report.feasible ? 0 : kExitInfeasible;
}

int cmd_validate(const Source& src, const std::string& solution, double omega) {
  const Instance inst = src.load();
  const Solution sol = parse_solution(inst, read_file(solution), omega);
  const ValidationReport rep = validate_solution(inst, sol, omega);
  std::cout << "objective " << format_double(recompute_objective(inst, sol, omega)) << '\n';
  if (rep.clean()) {
    std::cout << "clean\n";
    return 0;
  }
  std::cout << rep.to_string();
  return 1;
}

int cmd_convert(const Source& src, const std::string& out) {
  const std::string text = write_canonical(src.load());
  if (out.empty()) std::cout << text;
  else write_text(out, text);
  return 0;
}

int cmd_bench(const std::string& manifest, int jobs, const std::string& csv, const std::string& table) {
  std::string base;
  if (auto s = manifest.find_last_of('/'); s != std::string::npos) base = manifest.substr(0, s);
  const auto entries = parse_manifest(read_file(manifest), base);
  const Experiment ex = run_experiment(entries, jobs, BksRegistry::load_default(), [](const RunReport& r) {
    std::cerr << r.instance << " seed " << r.seed << " obj " << format_double(r.best_objective) << '\n';
  });
  if (!csv.empty()) write_text(csv, reports_csv(ex.reports));
  const std::string rendered = render_gap_table(ex.table);
  if (!table.empty()) write_text(table, rendered);
  std::cout << rendered;
  return 0;
}

int cmd_omega(const std::vector<std::string>& paths, const Source& src, const ParamFlags& pf,
              const std::vector<double>& grid, int seeds, int jobs) {
  std::vector<Instance> instances;
  for (const std::string& p : paths) {
    Source s = src;
    s.path = p;
    instances.push_back(s.load());
  }
  std::vector<std::uint64_t> seed_list;
  for (int s = 1; s <= seeds; ++s) seed_list.push_back(static_cast<std::uint64_t>(s));
  const OmegaTable t = omega_calibration(instances, grid, seed_list, pf.build(), jobs);
  std::cout << render_omega_table(t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous-fleet vehicle routing solver"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one instance");
  Source solve_src;
  ParamFlags solve_params;
  bool print_params = false;
  std::string solve_out;
  solve_src.add(solve, false);
  solve_params.add(solve);
  solve->add_flag("--print-params", print_params, "print the effective parameters and exit");
  solve->add_option("--out", solve_out, "solution file (a .report file is written next to it)");

  auto* validate = app.add_subcommand("validate", "check a solution file");
  Source val_src;
  std::string val_solution;
  double val_omega = SolverParams{}.omega;
  val_src.add(validate);
  validate->add_option("--solution", val_solution, "solution file")->required();
  validate->add_option("--omega", val_omega, "time-warp penalty");

  auto* convert = app.add_subcommand("convert", "write an instance in canonical form");
  Source conv_src;
  std::string conv_out;
  conv_src.add(convert);
  convert->add_option("--out", conv_out, "output file");

  auto* bench = app.add_subcommand("bench", "run a manifest and report gaps");
  std::string manifest, csv, table;
  int jobs = 1;
  bench->add_option("--manifest", manifest, "manifest file")->required();
  bench->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
  bench->add_option("--csv", csv, "raw reports CSV");
  bench->add_option("--out", table, "rendered gap table");

  auto* omega = app.add_subcommand("omega", "feasibility rate per time-warp penalty");
  std::vector<std::string> omega_paths;
  Source omega_src;
  ParamFlags omega_params;
  std::vector<double> grid = {1, 10, 100, 1000};
  int omega_seeds = 10;
  int omega_jobs = 1;
  omega->add_option("--instances", omega_paths, "instance files")->required();
  omega->add_option("--format", omega_src.format, "classic format");
  omega->add_option("--variant", omega_src.variant, "variant tag");
  omega->add_option("--fleet", omega_src.fleet, "fleet block");
  omega->add_option("--grid", grid, "penalty values");
  omega->add_option("--seeds", omega_seeds, "seeds 1..N")->check(CLI::PositiveNumber);
  omega->add_option("--jobs", omega_jobs, "concurrent runs")->check(CLI::PositiveNumber);
  omega_params.add(omega);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (*solve) {
      if (!print_params && solve_src.path.empty()) {
        std::cerr << "solve: --instance is required\n";
        return kExitParse;
      }
      return cmd_solve(solve_src, solve_params, print_params, solve_out);
    }
    if (*validate) return cmd_validate(val_src, val_solution, val_omega);
    if (*convert) return cmd_convert(conv_src, conv_out);
    if (*bench) return cmd_bench(manifest, jobs, csv, table);
    if (*omega) return cmd_omega(omega_paths, omega_src, omega_params, grid, omega_seeds, omega_jobs);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
