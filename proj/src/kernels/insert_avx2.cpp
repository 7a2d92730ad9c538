#include <immintrin.h>

#include "hfvrp/kernels.hpp"

namespace hfvrp::kernels {

void insert_costs_avx2(const InsertScan& sc, double* out) {
  const StatColumns& p = *sc.prefix;
  const StatColumns& s = *sc.suffix;
  const SeqStat& m = sc.mid;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d inf = _mm256_set1_pd(kInf);
  const __m256d m_e = _mm256_set1_pd(m.earliest);
  const __m256d m_l = _mm256_set1_pd(m.latest);
  const __m256d m_dist = _mm256_set1_pd(m.dist);
  const __m256d m_dur = _mm256_set1_pd(m.duration);
  const __m256d m_w = _mm256_set1_pd(m.warp);
  const __m256d m_del = _mm256_set1_pd(m.delivery);
  const __m256d m_pick = _mm256_set1_pd(m.pickup);
  const __m256d m_peak = _mm256_set1_pd(m.peak);
  const __m256d cap = _mm256_set1_pd(sc.capacity);
  const __m256d limit = _mm256_set1_pd(sc.limit);
  const __m256d fixed = _mm256_set1_pd(sc.fixed);
  const __m256d var = _mm256_set1_pd(sc.var);
  const __m256d omega = _mm256_set1_pd(sc.omega);

  std::size_t j = 0;
  for (; j + 4 <= sc.count; j += 4) {
    const std::size_t a = sc.prefix_offset + j;
    const std::size_t b = sc.suffix_offset + j;
    const __m256d din = _mm256_loadu_pd(sc.d_in + j);
    const __m256d dout = _mm256_loadu_pd(sc.d_out + j);
    const __m256d p_dur = _mm256_loadu_pd(&p.duration[a]);
    const __m256d p_w = _mm256_loadu_pd(&p.warp[a]);
    const __m256d p_e = _mm256_loadu_pd(&p.earliest[a]);
    const __m256d p_l = _mm256_loadu_pd(&p.latest[a]);
    const __m256d p_pick = _mm256_loadu_pd(&p.pickup[a]);

    const __m256d delta = _mm256_add_pd(_mm256_sub_pd(p_dur, p_w), din);
    const __m256d wt = _mm256_max_pd(_mm256_sub_pd(_mm256_sub_pd(m_e, delta), p_l), zero);
    const __m256d tw = _mm256_max_pd(_mm256_sub_pd(_mm256_add_pd(p_e, delta), m_l), zero);
    const __m256d a_dist =
        _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(&p.dist[a]), din), m_dist);
    const __m256d a_dur =
        _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(p_dur, din), m_dur), wt);
    const __m256d a_e = _mm256_sub_pd(_mm256_max_pd(_mm256_sub_pd(m_e, delta), p_e), wt);
    const __m256d a_l = _mm256_add_pd(_mm256_min_pd(_mm256_sub_pd(m_l, delta), p_l), tw);
    const __m256d a_w = _mm256_add_pd(_mm256_add_pd(p_w, m_w), tw);
    const __m256d a_pick = _mm256_add_pd(p_pick, m_pick);
    const __m256d a_peak = _mm256_max_pd(_mm256_add_pd(_mm256_loadu_pd(&p.peak[a]), m_del),
                                         _mm256_add_pd(m_peak, p_pick));

    const __m256d delta2 = _mm256_add_pd(_mm256_sub_pd(a_dur, a_w), dout);
    const __m256d wt2 = _mm256_max_pd(
        _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(&s.earliest[b]), delta2), a_l), zero);
    const __m256d tw2 = _mm256_max_pd(
        _mm256_sub_pd(_mm256_add_pd(a_e, delta2), _mm256_loadu_pd(&s.latest[b])), zero);
    const __m256d dist = _mm256_add_pd(_mm256_add_pd(a_dist, dout), _mm256_loadu_pd(&s.dist[b]));
    const __m256d dur = _mm256_add_pd(
        _mm256_add_pd(_mm256_add_pd(a_dur, dout), _mm256_loadu_pd(&s.duration[b])), wt2);
    const __m256d warp = _mm256_add_pd(_mm256_add_pd(a_w, _mm256_loadu_pd(&s.warp[b])), tw2);
    const __m256d peak =
        _mm256_max_pd(_mm256_add_pd(a_peak, _mm256_loadu_pd(&s.delivery[b])),
                      _mm256_add_pd(_mm256_loadu_pd(&s.peak[b]), a_pick));

    const __m256d len = sc.limit_on_distance ? dist : dur;
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(peak, cap, _CMP_LE_OQ),
                                     _mm256_cmp_pd(len, limit, _CMP_LE_OQ));
    const __m256d cost =
        _mm256_add_pd(_mm256_add_pd(fixed, _mm256_mul_pd(var, dist)), _mm256_mul_pd(omega, warp));
    _mm256_storeu_pd(out + j, _mm256_blendv_pd(inf, cost, ok));
  }
  if (j < sc.count) {
    InsertScan tail = sc;
    tail.prefix_offset += j;
    tail.suffix_offset += j;
    tail.d_in += j;
    tail.d_out += j;
    tail.count -= j;
    insert_costs_scalar(tail, out + j);
  }
}

}  // namespace hfvrp::kernels
