#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hfvrp/kernels.hpp"
#include "hfvrp/model.hpp"
#include "hfvrp/rng.hpp"

namespace hfvrp {

enum class Neighborhood {
  shift10,
  shift20,
  swap11,
  swap21,
  swap22,
  two_opt_star,
  k_shift,
  shift_depot,
  swap_depot,
  swap11_star,
  swap21_star,
  route_addition,
  k_split,
};

enum class IntraNeighborhood { reinsertion, or_opt2, or_opt3, two_opt, exchange };

const char* to_string(Neighborhood n);
const char* to_string(IntraNeighborhood n);

struct NeighborhoodSet {
  std::vector<Neighborhood> inter;
  std::vector<IntraNeighborhood> intra;

  static NeighborhoodSet for_instance(const Instance& inst);
};

// Planned placement of a split quantity.
struct SplitPart {
  int route = -1;
  // Insertion after node index `pos`, or the visit at `pos` when `merge`.
  int pos = 0;
  int quantity = 0;
  bool merge = false;
};

struct Move {
  Neighborhood tag = Neighborhood::shift10;
  std::optional<IntraNeighborhood> intra;
  int r1 = -1;
  int r2 = -1;
  // Positions in the depot-framed node arrays (customers at 1..n).
  int p = 0;
  int q = 0;
  int k = 1;
  // Split moves: quantity sent from r1 to r2 and back, and which side of the
  // remaining visit the incoming customer goes (0 before, 1 after).
  int x = 0;
  int y = 0;
  int side1 = 0;
  int side2 = 0;
  int depot = -1;
  std::vector<SplitPart> parts;
  // Vehicle per touched route after the move; `all_vehicles` for global
  // reassignment.
  int v1 = -1;
  int v2 = -1;
  std::vector<int> all_vehicles;
  double delta = 0.0;
};

struct SearchOptions {
  double omega = 1000.0;
  CnsMode cns = CnsMode::off;
  // Recompute the objective after every accepted move and compare deltas.
  bool check_moves = false;
  bool cache = true;
};

struct SearchStats {
  long long evaluations = 0;
  long long moves = 0;
  long long intra_moves = 0;
};

class MoveCheckError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RouteState {
  int depot = 0;
  int vehicle = 0;
  // Depot-framed sequence: nodes[0] and nodes[n + 1] are the depot.
  std::vector<int> nodes;
  std::vector<int> qty;
  std::vector<SeqStat> fwd;
  std::vector<SeqStat> bwd;
  // core[p]: nodes[p..n] without the closing depot; used when the tail of a
  // route moves to a route anchored at another depot.
  std::vector<SeqStat> core;
  StatColumns fwd_cols;
  StatColumns bwd_cols;
  double cost = 0.0;
  std::uint64_t uid = 0;

  int size() const { return static_cast<int>(nodes.size()) - 2; }
  bool empty() const { return size() == 0; }
  const SeqStat& stat() const { return fwd.back(); }
  int load() const { return stat().load(); }
};

class LocalSearch {
 public:
  LocalSearch(const Instance& inst, SearchOptions opt);

  void load(const Solution& sol);
  // Current solution without empty routes.
  Solution solution() const;
  double objective() const;

  // Randomized VND over the active inter-route neighborhoods.
  void rvnd(Rng& rng);
  std::optional<Move> explore(Neighborhood n);
  void apply(const Move& m);
  // Returns true when the route improved.
  bool intra_rvnd(int route, Rng& rng);
  std::optional<Move> explore_intra(IntraNeighborhood n, int route);

  const std::vector<RouteState>& routes() const { return routes_; }
  const SearchStats& stats() const { return stats_; }
  const NeighborhoodSet& neighborhoods() const { return set_; }

 private:
  struct Cached {
    std::uint64_t uid1 = 0;
    std::uint64_t uid2 = 0;
    bool found = false;
    Move move;
  };

  void rebuild(RouteState& r);
  void set_visits(int route, const std::vector<int>& nodes, const std::vector<int>& qty);
  void sync_spares();
  bool active(int route) const;
  std::vector<Visit> visits_of(const RouteState& r) const;
  SeqStat single(int node, int quantity) const;
  SeqStat segment(const RouteState& r, int from, int to) const;
  SeqStat suffix_to(const RouteState& src, int from, int depot) const;
  SeqStat with_depot(int depot, const std::vector<int>& nodes, const std::vector<int>& qty) const;
  double route_cost_on(const SeqStat& s, int type) const;

  // Cost of the two touched routes after a move, re-optimizing vehicles per
  // the CNS mode. Returns false when infeasible.
  bool price_pair(const SeqStat& s1, int r1, const SeqStat& s2, int r2, Move& m);
  bool price_single(const SeqStat& s1, int r1, Move& m);
  bool price_many(const std::vector<std::pair<int, SeqStat>>& changed, Move& m);
  void consider(Move& best, bool& found, const Move& cand) const;

  void explore_pair(Neighborhood n, int r1, int r2, Move& best, bool& found);
  void pair_shift(int r1, int r2, int len, Move& best, bool& found);
  void pair_swap(int r1, int r2, int len1, int len2, Move& best, bool& found);
  void pair_two_opt_star(int r1, int r2, Move& best, bool& found);
  void pair_k_shift(int r1, int r2, Move& best, bool& found);
  // Split deliveries: positions of the customers shared by two routes, so
  // moves never put a customer twice on one route.
  void mark_pair(int r1, int r2);
  bool moved_clash(int p, int len, int q, int len2) const;
  bool tails_clash(int p, int q) const;
  void pair_swap11_star(int r1, int r2, Move& best, bool& found);
  void pair_swap21_star(int r1, int r2, Move& best, bool& found);
  void explore_shift_depot(Move& best, bool& found);
  void explore_swap_depot(Move& best, bool& found);
  void explore_route_addition(Move& best, bool& found);
  void explore_k_split(Move& best, bool& found);
  bool ordered(Neighborhood n) const;

  void apply_intra(const Move& m);
  void check_delta(double before, const Move& m) const;

  const Instance& inst_;
  SearchOptions opt_;
  NeighborhoodSet set_;
  std::vector<RouteState> routes_;
  std::vector<char> active_;
  std::vector<int> used_;
  std::vector<int> depot_used_;
  std::vector<int> slot_of_;
  std::uint64_t next_uid_ = 1;
  std::uint64_t epoch_ = 0;
  std::uint64_t cache_epoch_ = 0;
  std::unordered_map<std::uint64_t, Cached> cache_[13];
  SearchStats stats_;
  std::vector<double> scratch_in_, scratch_out_, scratch_cost_;
  std::vector<int> pos_a_, pos_b_;
  std::vector<int> marked_;
  std::vector<int> shared_;
};

Solution rvnd(const Instance& inst, const Solution& sol, double omega, Rng& rng,
              CnsMode cns = CnsMode::off);
std::optional<Move> explore(Neighborhood n, const Instance& inst, const Solution& sol,
                            double omega, CnsMode cns = CnsMode::off);
Route intra_rvnd(const Instance& inst, const Route& route, double omega, Rng& rng);

}  // namespace hfvrp
