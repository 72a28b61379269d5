// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kob/kernels.hpp"

namespace kob::kernels {

#ifdef KOB_HAVE_AVX2_TU
const Table &avx2_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(KOB_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  const char *env = std::getenv("KOB_SIMD");
  const std::string want = env ? env : "auto";
  if (want == "scalar")
    return Backend::scalar;
  if (want == "avx2" && !cpu_has_avx2())
    throw std::invalid_argument("KOB_SIMD=avx2 requested but AVX2/FMA is unavailable");
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const Table *> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

} // namespace

bool available(Backend b) {
  switch (b) {
  case Backend::scalar:
    return true;
  case Backend::avx2:
    return cpu_has_avx2();
  }
  return false;
}

const Table &table(Backend b) {
  if (!available(b))
    throw std::invalid_argument("kernel backend not available on this CPU");
#ifdef KOB_HAVE_AVX2_TU
  if (b == Backend::avx2)
    return avx2_table();
#endif
  return scalar_table();
}

void set_backend(Backend b) {
  const Table &t = table(b);
  g_backend.store(b);
  g_active.store(&t);
}

const Table &active() {
  const Table *t = g_active.load(std::memory_order_acquire);
  if (t)
    return *t;
  static const bool once = [] {
    const Backend b = initial_backend();
    const Table *expected = nullptr;
    if (g_active.compare_exchange_strong(expected, &table(b)))
      g_backend.store(b);
    return true;
  }();
  (void)once;
  return *g_active.load(std::memory_order_acquire);
}

Backend active_backend() {
  (void)active();
  return g_backend.load();
}

} // namespace kob::kernels
