#include "hfvrp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hfvrp {

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw std::invalid_argument("bad value for " + std::string(key) + ": " + std::string(v));
  return out;
}

bool parse_switch(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::invalid_argument("bad value for " + std::string(key) + ": " + std::string(v));
}

const char* cns_name(CnsMode m) {
  switch (m) {
    case CnsMode::off: return "off";
    case CnsMode::sfr: return "sfr";
    case CnsMode::pda: return "pda";
  }
  return "?";
}

std::vector<std::uint64_t> parse_seeds(std::string_view v) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const std::size_t comma = std::min(v.find(',', pos), v.size());
    const std::string_view item = v.substr(pos, comma - pos);
    if (const std::size_t dash = item.find('-'); dash != std::string_view::npos) {
      const auto lo = parse_number<std::uint64_t>("seeds", item.substr(0, dash));
      const auto hi = parse_number<std::uint64_t>("seeds", item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("bad seed range: " + std::string(item));
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(parse_number<std::uint64_t>("seeds", item));
    }
    pos = comma + 1;
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void set_param(SolverParams& p, std::string_view key, std::string_view value) {
  if (key == "ims") p.ims = parse_number<int>(key, value);
  else if (key == "iils") p.iils = parse_number<int>(key, value);
  else if (key == "tmax") p.tmax = parse_number<double>(key, value);
  else if (key == "rgap") p.rgap = parse_number<double>(key, value);
  else if (key == "n_large" || key == "n-large") p.n_large = parse_number<int>(key, value);
  else if (key == "omega") p.omega = parse_number<double>(key, value);
  else if (key == "seed") p.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "merge") p.merge = parse_switch(key, value);
  else if (key == "sp") p.sp = parse_switch(key, value);
  else if (key == "pool_gap" || key == "pool-gap") p.pool_gap = parse_number<double>(key, value);
  else if (key == "pool_cap" || key == "pool-cap") p.pool_cap = parse_number<std::size_t>(key, value);
  else if (key == "time_limit" || key == "time-limit") p.time_limit = parse_number<double>(key, value);
  else if (key == "sp_node_limit" || key == "sp-node-limit")
    p.sp_node_limit = parse_number<long long>(key, value);
  else if (key == "cns") {
    if (value == "off") p.cns = CnsMode::off;
    else if (value == "sfr") p.cns = CnsMode::sfr;
    else if (value == "pda") p.cns = CnsMode::pda;
    else throw std::invalid_argument("bad value for cns: " + std::string(value));
  } else {
    throw std::invalid_argument("unknown parameter: " + std::string(key));
  }
}

std::string describe_params(const SolverParams& p) {
  std::ostringstream os;
  os << "ims=" << p.ims << '\n'
     << "iils=" << (p.iils ? std::to_string(*p.iils) : std::string("auto")) << '\n'
     << "tmax=" << format_double(p.tmax) << '\n'
     << "rgap=" << format_double(p.rgap) << '\n'
     << "n_large=" << p.n_large << '\n'
     << "omega=" << format_double(p.omega) << '\n'
     << "seed=" << p.seed << '\n'
     << "cns=" << cns_name(p.cns) << '\n'
     << "merge=" << (p.merge ? "on" : "off") << '\n'
     << "sp=" << (p.sp ? "on" : "off") << '\n'
     << "pool_gap=" << format_double(p.pool_gap) << '\n'
     << "pool_cap=" << p.pool_cap << '\n'
     << "time_limit=" << (p.time_limit ? format_double(*p.time_limit) : std::string("none")) << '\n'
     << "sp_node_limit="
     << (p.sp_node_limit ? std::to_string(*p.sp_node_limit) : std::string("none")) << '\n';
  return os.str();
}

std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::string& base_dir) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 2) throw ParseError(lineno, 1, "expected <path> <variant>");
    ManifestEntry e;
    e.path = tok[0];
    if (!base_dir.empty() && e.path.front() != '/') e.path = base_dir + "/" + e.path;
    if (!variant_from_string(tok[1])) throw ParseError(lineno, 1, "unknown variant " + tok[1]);
    e.variant = tok[1];
    e.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    for (std::size_t i = 2; i < tok.size(); ++i) {
      const auto eq = tok[i].find('=');
      if (eq == std::string::npos) throw ParseError(lineno, 1, "expected key=value: " + tok[i]);
      const std::string key = tok[i].substr(0, eq);
      const std::string value = tok[i].substr(eq + 1);
      try {
        if (key == "seeds") {
          e.seeds = parse_seeds(value);
        } else if (key == "format") {
          e.format = classic_format_from_string(value);
          if (!e.format) throw std::invalid_argument("unknown format " + value);
        } else if (key == "fleet") {
          if (value.size() != 1) throw std::invalid_argument("fleet is one letter");
          e.fleet = value[0];
        } else if (key == "name") {
          e.name = value;
        } else {
          set_param(e.params, key, value);
        }
      } catch (const std::invalid_argument& err) {
        throw ParseError(lineno, 1, err.what());
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

double gap_percent(double sol, double bks) { return 100.0 * (sol - bks) / bks; }

GapTable make_gap_table(const std::vector<RunReport>& reports, const BksRegistry& bks) {
  GapTable t;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::vector<double> sums;
  std::vector<double> times;
  for (const RunReport& r : reports) {
    const auto key = std::make_pair(r.instance, r.variant);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, t.rows.size()).first;
      GapRow row;
      row.instance = r.instance;
      row.variant = r.variant;
      row.bks = bks.lookup(r.instance, r.variant);
      row.flagged = !row.bks;
      t.rows.push_back(row);
      sums.push_back(0.0);
      times.push_back(0.0);
    }
    GapRow& row = t.rows[it->second];
    ++row.runs;
    if (r.feasible) ++row.feasible_runs;
    row.best = std::min(row.best, r.best_objective);
    sums[it->second] += r.best_objective;
    times[it->second] += r.wall_seconds;
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    GapRow& row = t.rows[i];
    row.avg = sums[i] / row.runs;
    row.avg_time = times[i] / row.runs;
    if (row.bks) {
      row.best_gap = gap_percent(row.best, *row.bks);
      row.avg_gap = gap_percent(row.avg, *row.bks);
      t.avg_best_gap += row.best_gap;
      t.avg_avg_gap += row.avg_gap;
      t.avg_time += row.avg_time;
      ++t.counted;
    }
  }
  if (t.counted > 0) {
    t.avg_best_gap /= t.counted;
    t.avg_avg_gap /= t.counted;
    t.avg_time /= t.counted;
  }
  return t;
}

std::string reports_csv(const std::vector<RunReport>& reports) {
  std::ostringstream os;
  os << "instance,variant,seed,best_objective,wall_seconds,feasible,tw_violation,fleet,restarts,"
        "ils_iterations,moves,sp_solves,sp_nodes,pool_size,time_limited\n";
  for (const RunReport& r : reports) {
    std::string fleet;
    for (std::size_t k = 0; k < r.fleet.size(); ++k) fleet += (k ? " " : "") + std::to_string(r.fleet[k]);
    os << csv_field(r.instance) << ',' << csv_field(r.variant) << ',' << r.seed << ','
       << format_double(r.best_objective) << ',' << format_double(r.wall_seconds) << ','
       << (r.feasible ? 1 : 0) << ',' << format_double(r.tw_violation) << ',' << fleet << ','
       << r.restarts.size() << ',' << r.ils_iterations << ',' << r.moves << ',' << r.sp_solves << ','
       << r.sp_nodes << ',' << r.pool_size << ',' << (r.time_limited ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string render_gap_table(const GapTable& t) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %-14s %12s %12s %8s %12s %8s %9s\n", "Inst", "Variant", "BKS",
                "Best Sol.", "Gap", "Avg Sol.", "Gap", "Time(s)");
  os << buf;
  for (const GapRow& r : t.rows) {
    const std::string bks = r.bks ? fixed2(*r.bks) : "-";
    const std::string bg = r.bks ? fixed2(r.best_gap) : "n/a";
    const std::string ag = r.bks ? fixed2(r.avg_gap) : "n/a";
    std::snprintf(buf, sizeof buf, "%-16s %-14s %12s %12s %8s %12s %8s %9s%s\n", r.instance.c_str(),
                  r.variant.c_str(), bks.c_str(), fixed2(r.best).c_str(), bg.c_str(),
                  fixed2(r.avg).c_str(), ag.c_str(), fixed2(r.avg_time).c_str(),
                  r.flagged ? "  [no BKS]" : "");
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%-16s %-14s %12s %12s %8s %12s %8s %9s\n", "Average", "", "", "",
                fixed2(t.avg_best_gap).c_str(), "", fixed2(t.avg_avg_gap).c_str(),
                fixed2(t.avg_time).c_str());
  os << buf;
  return os.str();
}

namespace {

template <class Job>
void run_pool(std::size_t count, int jobs, const Job& job) {
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Experiment run_experiment(const std::vector<ManifestEntry>& manifest, int jobs,
                          const BksRegistry& bks, const RunCallback& on_done) {
  std::vector<Instance> instances;
  instances.reserve(manifest.size());
  for (const ManifestEntry& e : manifest) {
    const auto v = variant_from_string(e.variant);
    if (!v) throw std::invalid_argument("unknown variant " + e.variant);
    instances.push_back(load_instance(e.path, e.format, v, e.fleet));
    if (!e.name.empty()) instances.back().name = e.name;
  }
  std::vector<std::pair<std::size_t, std::uint64_t>> work;
  for (std::size_t i = 0; i < manifest.size(); ++i)
    for (std::uint64_t s : manifest[i].seeds) work.emplace_back(i, s);

  Experiment ex;
  ex.reports.resize(work.size());
  std::mutex cb_mu;
  run_pool(work.size(), jobs, [&](std::size_t j) {
    const auto [i, seed] = work[j];
    SolverParams p = manifest[i].params;
    p.seed = seed;
    RunReport r = hils(instances[i], p).report;
    r.variant = to_string(*variant_from_string(manifest[i].variant));
    ex.reports[j] = r;
    if (on_done) {
      std::lock_guard lock(cb_mu);
      on_done(r);
    }
  });
  ex.table = make_gap_table(ex.reports, bks);
  return ex;
}

bool tw_feasible(const RunReport& r) { return r.tw_violation <= 1e-9; }

OmegaTable omega_calibration(const std::vector<Instance>& instances, const std::vector<double>& grid,
                             const std::vector<std::uint64_t>& seeds, const SolverParams& base,
                             int jobs) {
  OmegaTable t;
  t.grid = grid;
  const std::size_t per_inst = grid.size() * seeds.size();
  std::vector<char> ok(instances.size() * per_inst, 0);
  run_pool(ok.size(), jobs, [&](std::size_t j) {
    const std::size_t i = j / per_inst;
    const std::size_t g = (j % per_inst) / seeds.size();
    const std::size_t s = j % seeds.size();
    SolverParams p = base;
    p.omega = grid[g];
    p.seed = seeds[s];
    ok[j] = tw_feasible(hils(instances[i], p).report) ? 1 : 0;
  });
  t.overall.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    OmegaRow row;
    row.instance = instances[i].name;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      int hits = 0;
      for (std::size_t s = 0; s < seeds.size(); ++s) hits += ok[i * per_inst + g * seeds.size() + s];
      row.rates.push_back(seeds.empty() ? 0.0 : static_cast<double>(hits) / seeds.size());
      t.overall[g] += row.rates.back();
    }
    t.rows.push_back(std::move(row));
  }
  for (double& v : t.overall) v = instances.empty() ? 0.0 : v / instances.size();
  return t;
}

std::string render_omega_table(const OmegaTable& t) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-16s", "Inst");
  os << buf;
  for (double w : t.grid) {
    std::snprintf(buf, sizeof buf, " %9s", ("w=" + format_double(w)).c_str());
    os << buf;
  }
  os << '\n';
  auto line = [&](const std::string& name, const std::vector<double>& rates) {
    std::snprintf(buf, sizeof buf, "%-16s", name.c_str());
    os << buf;
    for (double r : rates) {
      std::snprintf(buf, sizeof buf, " %8.1f%%", 100.0 * r);
      os << buf;
    }
    os << '\n';
  };
  for (const OmegaRow& r : t.rows) line(r.instance, r.rates);
  line("Overall", t.overall);
  return os.str();
}

}  // namespace hfvrp
