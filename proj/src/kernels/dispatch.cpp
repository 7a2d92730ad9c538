#include <atomic>

#include "hfvrp/kernels.hpp"

namespace hfvrp {
namespace kernels {
namespace {

std::atomic<bool> g_force_scalar{false};

bool detect_avx2() {
#if defined(HFVRP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

bool avx2_supported() {
  static const bool ok = detect_avx2();
  return ok;
}

const char* active() { return (!g_force_scalar && avx2_supported()) ? "avx2" : "scalar"; }

void force_scalar(bool on) { g_force_scalar = on; }

}  // namespace kernels

void insert_costs(const InsertScan& scan, double* out) {
#if defined(HFVRP_HAVE_AVX2)
  if (!kernels::g_force_scalar.load(std::memory_order_relaxed) && kernels::avx2_supported()) {
    kernels::insert_costs_avx2(scan, out);
    return;
  }
#endif
  kernels::insert_costs_scalar(scan, out);
}

}  // namespace hfvrp
