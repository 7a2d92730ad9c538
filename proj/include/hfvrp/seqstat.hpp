#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>

namespace hfvrp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::uint64_t kAllTypes = ~std::uint64_t{0};

// Statistics of a visit sequence. Loads keep the mixed-backhaul triple:
// delivery and pickup sums plus the peak on-board load, assuming the vehicle
// leaves the first node carrying every delivery of the sequence.
struct SeqStat {
  double dist = 0.0;
  double duration = 0.0;
  double earliest = 0.0;
  double latest = kInf;
  double warp = 0.0;
  int delivery = 0;
  int pickup = 0;
  int peak = 0;
  std::uint64_t types = kAllTypes;
  int first = -1;
  int last = -1;
  int customers = 0;

  int load() const { return delivery + pickup; }
  bool operator==(const SeqStat&) const = default;
};

struct ConcatDeltas {
  double delta = 0.0;
  double waiting = 0.0;
  double warp = 0.0;
};

inline ConcatDeltas concat_deltas(const SeqStat& a, const SeqStat& b,
                                  double d_link) {
  ConcatDeltas c;
  c.delta = a.duration - a.warp + d_link;
  c.waiting = std::max(b.earliest - c.delta - a.latest, 0.0);
  c.warp = std::max(a.earliest + c.delta - b.latest, 0.0);
  return c;
}

inline SeqStat seq_concat(const SeqStat& a, const SeqStat& b, double d_link) {
  const ConcatDeltas c = concat_deltas(a, b, d_link);
  SeqStat r;
  r.dist = a.dist + d_link + b.dist;
  r.duration = a.duration + d_link + b.duration + c.waiting;
  r.earliest = std::max(b.earliest - c.delta, a.earliest) - c.waiting;
  r.latest = std::min(b.latest - c.delta, a.latest) + c.warp;
  r.warp = a.warp + b.warp + c.warp;
  r.delivery = a.delivery + b.delivery;
  r.pickup = a.pickup + b.pickup;
  r.peak = std::max(a.peak + b.delivery, b.peak + a.pickup);
  r.types = a.types & b.types;
  r.first = a.first;
  r.last = b.last;
  r.customers = a.customers + b.customers;
  return r;
}

}  // namespace hfvrp
