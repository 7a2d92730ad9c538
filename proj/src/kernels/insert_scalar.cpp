#include "hfvrp/kernels.hpp"

namespace hfvrp {

void StatColumns::resize(std::size_t n) {
  for (auto* v : {&dist, &duration, &earliest, &latest, &warp, &delivery, &pickup, &peak})
    v->resize(n);
}

void StatColumns::set(std::size_t i, const SeqStat& s) {
  dist[i] = s.dist;
  duration[i] = s.duration;
  earliest[i] = s.earliest;
  latest[i] = s.latest;
  warp[i] = s.warp;
  delivery[i] = s.delivery;
  pickup[i] = s.pickup;
  peak[i] = s.peak;
}

namespace kernels {
namespace {

// Same selection rule as the packed max/min instructions.
inline double vmax(double a, double b) { return a > b ? a : b; }
inline double vmin(double a, double b) { return a < b ? a : b; }

}  // namespace

void insert_costs_scalar(const InsertScan& sc, double* out) {
  const StatColumns& p = *sc.prefix;
  const StatColumns& s = *sc.suffix;
  const SeqStat& m = sc.mid;
  const double m_del = m.delivery;
  const double m_pick = m.pickup;
  const double m_peak = m.peak;
  for (std::size_t j = 0; j < sc.count; ++j) {
    const std::size_t a = sc.prefix_offset + j;
    const std::size_t b = sc.suffix_offset + j;
    const double din = sc.d_in[j];
    const double dout = sc.d_out[j];

    const double delta = p.duration[a] - p.warp[a] + din;
    const double wt = vmax(m.earliest - delta - p.latest[a], 0.0);
    const double tw = vmax(p.earliest[a] + delta - m.latest, 0.0);
    const double a_dist = p.dist[a] + din + m.dist;
    const double a_dur = p.duration[a] + din + m.duration + wt;
    const double a_e = vmax(m.earliest - delta, p.earliest[a]) - wt;
    const double a_l = vmin(m.latest - delta, p.latest[a]) + tw;
    const double a_w = p.warp[a] + m.warp + tw;
    const double a_pick = p.pickup[a] + m_pick;
    const double a_peak = vmax(p.peak[a] + m_del, m_peak + p.pickup[a]);

    const double delta2 = a_dur - a_w + dout;
    const double wt2 = vmax(s.earliest[b] - delta2 - a_l, 0.0);
    const double tw2 = vmax(a_e + delta2 - s.latest[b], 0.0);
    const double dist = a_dist + dout + s.dist[b];
    const double dur = a_dur + dout + s.duration[b] + wt2;
    const double warp = a_w + s.warp[b] + tw2;
    const double peak = vmax(a_peak + s.delivery[b], s.peak[b] + a_pick);

    const double len = sc.limit_on_distance ? dist : dur;
    const bool ok = peak <= sc.capacity && len <= sc.limit;
    out[j] = ok ? (sc.fixed + sc.var * dist) + sc.omega * warp : kInf;
  }
}

}  // namespace kernels
}  // namespace hfvrp
