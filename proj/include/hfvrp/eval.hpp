#pragma once

#include <vector>

#include "hfvrp/model.hpp"
#include "hfvrp/seqstat.hpp"

namespace hfvrp {

SeqStat seq_singleton(const Instance& inst, int node, int quantity);
SeqStat seq_singleton(const Instance& inst, int node);

inline SeqStat join(const Instance& inst, const SeqStat& a, const SeqStat& b) {
  return seq_concat(a, b, inst.d(a.last, b.first));
}

SeqStat route_stat(const Instance& inst, int depot, const std::vector<Visit>& visits,
                   bool open);

// Cost of a non-empty route; an empty route costs nothing.
inline double route_cost(const SeqStat& s, const VehicleType& vt, double omega) {
  return vt.fixed_cost + vt.var_cost * s.dist + omega * s.warp;
}

inline double limited_length(const Instance& inst, const SeqStat& s) {
  return inst.limit_on == LimitOn::distance ? s.dist : s.duration;
}

bool load_fits(const SeqStat& s, const VehicleType& vt);
bool capacity_filter(const SeqStat& s, const VehicleType& vt, const Instance& inst);
bool capacity_filter(const SeqStat& s, int type, const Instance& inst);

}  // namespace hfvrp
