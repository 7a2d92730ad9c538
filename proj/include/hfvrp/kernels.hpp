#pragma once

#include <cstddef>
#include <vector>

#include "hfvrp/seqstat.hpp"

namespace hfvrp {

// Structure-of-arrays copy of a run of SeqStat values.
struct StatColumns {
  std::vector<double> dist, duration, earliest, latest, warp, delivery, pickup, peak;

  void resize(std::size_t n);
  void set(std::size_t i, const SeqStat& s);
  std::size_t size() const { return dist.size(); }
};

// Cost of prefix[p + j] ⊕ mid ⊕ suffix[s + j] for j in [0, count), with
// d_in[j] / d_out[j] the two link lengths. Lanes failing the load or length
// limit get +inf.
struct InsertScan {
  const StatColumns* prefix = nullptr;
  std::size_t prefix_offset = 0;
  const StatColumns* suffix = nullptr;
  std::size_t suffix_offset = 0;
  const double* d_in = nullptr;
  const double* d_out = nullptr;
  SeqStat mid;
  double capacity = 0.0;
  double limit = kInf;
  bool limit_on_distance = false;
  double fixed = 0.0;
  double var = 0.0;
  double omega = 0.0;
  std::size_t count = 0;
};

void insert_costs(const InsertScan& scan, double* out);

namespace kernels {

void insert_costs_scalar(const InsertScan& scan, double* out);
#if defined(HFVRP_HAVE_AVX2)
void insert_costs_avx2(const InsertScan& scan, double* out);
#endif

bool avx2_supported();
// "scalar" or "avx2"; the variant insert_costs() dispatches to.
const char* active();
// Test hook: pin dispatch to the scalar reference.
void force_scalar(bool on);

}  // namespace kernels
}  // namespace hfvrp
