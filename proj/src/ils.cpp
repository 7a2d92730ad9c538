#include "hfvrp/ils.hpp"

#include <algorithm>
#include <sstream>

#include "hfvrp/construct.hpp"
#include "hfvrp/io.hpp"
#include "hfvrp/perturb.hpp"
#include "hfvrp/search.hpp"

namespace hfvrp {

namespace {

bool expired(const std::optional<Clock::time_point>& deadline) {
  return deadline && Clock::now() >= *deadline;
}

int routes_used(const Solution& s) {
  return static_cast<int>(std::count_if(s.routes.begin(), s.routes.end(),
                                        [](const Route& r) { return !r.empty(); }));
}

}  // namespace

std::string RunReport::fingerprint() const {
  std::ostringstream os;
  os << instance << '|' << variant << '|' << seed << '|' << format_double(best_objective) << '|'
     << feasible << '|' << format_double(tw_violation) << '|' << ils_iterations << '|' << moves << '|' << sp_solves << '|' << sp_nodes
     << '|' << pool_size;
  for (int f : fleet) os << ',' << f;
  for (const RestartTrace& t : restarts)
    os << ';' << format_double(t.initial) << ':' << format_double(t.after_ils) << ':'
       << format_double(t.after_sp) << ':' << t.iterations;
  return os.str();
}

int default_iils(const Instance& inst, const Solution& initial) {
  int v = 0;
  if (inst.fixed_fleet()) {
    for (int k = 0; k < inst.user_types; ++k) v += inst.fleet[k].count;
  } else {
    v = routes_used(initial);
  }
  return inst.num_customers() + 5 * v;
}

Solution local_search(const Instance& inst, const Solution& s, const SolverParams& params, Rng& rng,
                      long long* moves) {
  SearchOptions opt;
  opt.omega = params.omega;
  opt.cns = params.cns;
  LocalSearch ls(inst, opt);
  ls.load(s);
  ls.rvnd(rng);
  if (moves) *moves += ls.stats().moves + ls.stats().intra_moves;
  return ls.solution();
}

Solution ils_rvnd(IlsContext& ctx, const Solution& s0, int i_ils, Rng& rng) {
  Solution best = local_search(ctx.inst, s0, ctx.params, rng, &ctx.moves);
  ctx.pool.add_temporary_routes(ctx.inst, best, std::min(ctx.f_global, best.objective));
  int iter = 0;
  while (iter < i_ils) {
    if (expired(ctx.deadline)) break;
    const Solution perturbed = perturb(ctx.inst, best, rng, ctx.params);
    Solution cand = local_search(ctx.inst, perturbed, ctx.params, rng, &ctx.moves);
    ++ctx.iterations;
    ctx.pool.add_temporary_routes(ctx.inst, cand, std::min(ctx.f_global, best.objective));
    if (cand.objective < best.objective) {
      best = std::move(cand);
      iter = 0;
    }
    ++iter;
  }
  return best;
}

HilsResult hils(const Instance& inst, const SolverParams& params) {
  params.check();
  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline, ils_deadline;
  auto after = [&](double secs) {
    return start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(secs));
  };
  if (params.time_limit) {
    // The last SP solve keeps a share of the budget even when the restarts run long.
    deadline = after(*params.time_limit);
    ils_deadline = after(*params.time_limit - std::min(params.tmax, 0.25 * *params.time_limit));
  }
  HilsResult out;
  RunReport& rep = out.report;
  rep.instance = inst.name;
  rep.seed = params.seed;
  RoutePool pool(params.pool_cap, params.pool_gap);
  const bool sp_on = params.sp && !inst.attributes.split_delivery;
  const int n = inst.num_customers();
  bool have_best = false;
  for (int i = 1; i <= params.ims; ++i) {
    if (i > 1 && expired(ils_deadline)) {
      rep.time_limited = true;
      break;
    }
    Rng rng = make_rng(params.seed, static_cast<std::uint64_t>(i));
    const Solution s = build_initial(inst, params, rng);
    const int i_ils = params.iils ? *params.iils : default_iils(inst, s);
    IlsContext ctx{inst, params, pool, have_best ? out.best.objective : kInf, ils_deadline};
    RestartTrace tr;
    tr.restart = i;
    tr.initial = s.objective;
    Solution sp = ils_rvnd(ctx, s, i_ils, rng);
    tr.after_ils = sp.objective;
    const bool last = i == params.ims || expired(ils_deadline);
    if (sp_on && (n >= params.n_large || last) && !expired(deadline)) {
      Rng polish_rng = make_rng(params.seed, 1000000ull + static_cast<std::uint64_t>(i));
      auto improve = [&](const Solution& inc) {
        IlsContext inner{inst, params, pool, std::min(ctx.f_global, inc.objective), deadline};
        Solution r = ils_rvnd(inner, inc, i_ils, polish_rng);
        ctx.iterations += inner.iterations;
        ctx.moves += inner.moves;
        return r;
      };
      SpRun run = solve_sp(inst, pool, sp, params, improve, deadline);
      sp = std::move(run.best);
      rep.sp_solves += run.solves;
      rep.sp_nodes += run.nodes;
      tr.sp_called = true;
    }
    tr.after_sp = sp.objective;
    tr.iterations = ctx.iterations;
    rep.ils_iterations += ctx.iterations;
    rep.moves += ctx.moves;
    rep.restarts.push_back(tr);
    if (!have_best || sp.objective < out.best.objective) {
      out.best = std::move(sp);
      have_best = true;
    }
    if (last && i < params.ims) {
      rep.time_limited = true;
      break;
    }
  }
  if (expired(deadline)) rep.time_limited = true;
  drop_empty_routes(out.best);
  refresh(inst, out.best, params.omega);
  rep.best_objective = out.best.objective;
  rep.feasible = out.best.feasible && validate_solution(inst, out.best, params.omega).hard_clean();
  rep.tw_violation = out.best.tw_violation;
  rep.fleet = out.best.fleet_used;
  rep.pool_size = pool.size();
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace hfvrp
