#include "hfvrp/eval.hpp"

namespace hfvrp {

SeqStat seq_singleton(const Instance& inst, int node, int quantity) {
  const Node& nd = inst.nodes[node];
  SeqStat s;
  s.duration = nd.service;
  s.earliest = nd.ready;
  s.latest = nd.due;
  if (nd.role == Role::backhaul) {
    s.pickup = quantity;
  } else {
    s.delivery = quantity;
  }
  s.peak = quantity;
  s.types = nd.allowed;
  s.first = node;
  s.last = node;
  s.customers = nd.role == Role::depot ? 0 : 1;
  return s;
}

SeqStat seq_singleton(const Instance& inst, int node) {
  return seq_singleton(inst, node, inst.nodes[node].demand);
}

SeqStat route_stat(const Instance& inst, int depot, const std::vector<Visit>& visits,
                   bool open) {
  SeqStat s = seq_singleton(inst, depot, 0);
  for (const Visit& v : visits) s = join(inst, s, seq_singleton(inst, v.customer, v.quantity));
  if (!open) s = join(inst, s, seq_singleton(inst, depot, 0));
  return s;
}

bool load_fits(const SeqStat& s, const VehicleType& vt) { return s.peak <= vt.capacity; }

bool capacity_filter(const SeqStat& s, const VehicleType& vt, const Instance& inst) {
  if (s.peak > vt.capacity) return false;
  if (!((s.types >> vt.id) & 1u)) return false;
  if (inst.duration_limit && limited_length(inst, s) > *inst.duration_limit + 1e-9) return false;
  return true;
}

bool capacity_filter(const SeqStat& s, int type, const Instance& inst) {
  return capacity_filter(s, inst.fleet[type], inst);
}

}  // namespace hfvrp
