#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hfvrp/bks.hpp"
#include "hfvrp/ils.hpp"
#include "hfvrp/io.hpp"
#include "hfvrp/model.hpp"

namespace hfvrp {

// Sets one solver parameter from its flag name (without dashes), e.g.
// "ims", "cns", "sp". Throws std::invalid_argument on bad keys or values.
void set_param(SolverParams& p, std::string_view key, std::string_view value);
std::string describe_params(const SolverParams& p);

struct ManifestEntry {
  std::string path;
  // Registry name; defaults to the name read from the file.
  std::string name;
  std::string variant;
  std::optional<ClassicFormat> format;
  char fleet = 'A';
  SolverParams params;
  std::vector<std::uint64_t> seeds;
};

// One run per line: `<path> <variant> [key=value ...]`. Keys are solver
// parameters plus `seeds` (e.g. 1-10 or 1,4,7), `format`, `fleet` and
// `name`.
// Relative paths resolve against base_dir. '#' starts a comment.
std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::string& base_dir = "");

double gap_percent(double sol, double bks);

struct GapRow {
  std::string instance;
  std::string variant;
  std::optional<double> bks;
  double best = kInf;
  double avg = 0.0;
  double best_gap = 0.0;
  double avg_gap = 0.0;
  double avg_time = 0.0;
  int runs = 0;
  int feasible_runs = 0;
  // True when no BKS is registered; the row stays out of the aggregates.
  bool flagged = false;
};

struct GapTable {
  std::vector<GapRow> rows;
  double avg_best_gap = 0.0;
  double avg_avg_gap = 0.0;
  double avg_time = 0.0;
  int counted = 0;
};

// Groups reports by (instance, variant) in first-seen order.
GapTable make_gap_table(const std::vector<RunReport>& reports, const BksRegistry& bks);

std::string reports_csv(const std::vector<RunReport>& reports);
// Instance, BKS, best, best gap, avg, avg gap, time.
std::string render_gap_table(const GapTable& t);

struct Experiment {
  std::vector<RunReport> reports;
  GapTable table;
};

using RunCallback = std::function<void(const RunReport&)>;

// Runs every (entry, seed) job on up to `jobs` threads. Reports come back in
// manifest order whatever the scheduling.
Experiment run_experiment(const std::vector<ManifestEntry>& manifest, int jobs,
                          const BksRegistry& bks, const RunCallback& on_done = {});

struct OmegaRow {
  std::string instance;
  // rates[i] is the TW-feasible fraction for grid[i].
  std::vector<double> rates;
};

struct OmegaTable {
  std::vector<double> grid;
  std::vector<OmegaRow> rows;
  // Overall TW-feasible fraction per grid value.
  std::vector<double> overall;
};

bool tw_feasible(const RunReport& r);

OmegaTable omega_calibration(const std::vector<Instance>& instances, const std::vector<double>& grid,
                             const std::vector<std::uint64_t>& seeds, const SolverParams& base,
                             int jobs);

std::string render_omega_table(const OmegaTable& t);

}  // namespace hfvrp
