// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA backend. Compiled with -mavx2 -mfma; only reached after
// dispatch.cpp has confirmed CPU support. Complex data is interleaved
// (re, im), two values per 256-bit register.

#include <immintrin.h>

#include <cmath>

#include "kob/kernels.hpp"

namespace kob::kernels {
namespace {

inline __m256d swap_re_im(__m256d x) { return _mm256_permute_pd(x, 0b0101); }

// (ar + i ai) * x for two interleaved complex values
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, swap_re_im(x)));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void rotate_rows_avx2(cplx *x, cplx *y, std::size_t n, RowOp op) {
  auto *xd = reinterpret_cast<double *>(x);
  auto *yd = reinterpret_cast<double *>(y);
  const __m256d ar = _mm256_set1_pd(op.a.real()), ai = _mm256_set1_pd(op.a.imag());
  const __m256d br = _mm256_set1_pd(op.b.real()), bi = _mm256_set1_pd(op.b.imag());
  const __m256d cr = _mm256_set1_pd(op.c.real()), ci = _mm256_set1_pd(op.c.imag());
  const __m256d dr = _mm256_set1_pd(op.d.real()), di = _mm256_set1_pd(op.d.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, _mm256_add_pd(cmul(ar, ai, xv), cmul(br, bi, yv)));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(cmul(cr, ci, xv), cmul(dr, di, yv)));
  }
  for (; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = op.a * xi + op.b * yi;
    y[i] = op.c * xi + op.d * yi;
  }
}

void axpy_avx2(cplx *y, const cplx *x, std::size_t n, cplx alpha) {
  const auto *xd = reinterpret_cast<const double *>(x);
  auto *yd = reinterpret_cast<double *>(y);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul(ar, ai, xv)));
  }
  for (; i < n; ++i)
    y[i] += alpha * x[i];
}

double norm_sq_avx2(const cplx *x, std::size_t n) {
  const auto *xd = reinterpret_cast<const double *>(x);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d v = _mm256_loadu_pd(xd + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < m; ++i)
    s += xd[i] * xd[i];
  return s;
}

double diff_norm_sq_avx2(const cplx *x, const cplx *y, std::size_t n) {
  const auto *xd = reinterpret_cast<const double *>(x);
  const auto *yd = reinterpret_cast<const double *>(y);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(xd + i), _mm256_loadu_pd(yd + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < m; ++i) {
    const double d = xd[i] - yd[i];
    s += d * d;
  }
  return s;
}

void bounded_map_avx2(double *v, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d r = _mm256_sqrt_pd(_mm256_add_pd(one, _mm256_mul_pd(x, x)));
    _mm256_storeu_pd(v + i, _mm256_div_pd(x, r));
  }
  for (; i < n; ++i)
    v[i] = v[i] / std::sqrt(1.0 + v[i] * v[i]);
}

void shift_map_avx2(double *v, std::size_t n, double shift) {
  const __m256d a = _mm256_set1_pd(shift);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d below = _mm256_add_pd(one, a);
  const __m256d above = _mm256_sub_pd(one, a);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d d = _mm256_sub_pd(x, a);
    const __m256d lo = _mm256_div_pd(d, below);
    const __m256d hi = _mm256_div_pd(d, above);
    const __m256d le = _mm256_cmp_pd(x, a, _CMP_LE_OQ);
    const __m256d inner = _mm256_blendv_pd(hi, lo, le);
    const __m256d outside = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, x), one, _CMP_GE_OQ);
    _mm256_storeu_pd(v + i, _mm256_blendv_pd(inner, x, outside));
  }
  for (; i < n; ++i) {
    const double x = v[i];
    if (std::abs(x) >= 1.0)
      continue;
    v[i] = x <= shift ? (x - shift) / (1.0 + shift) : (x - shift) / (1.0 - shift);
  }
}

} // namespace

const Table &avx2_table() {
  static const Table t{"avx2",       rotate_rows_avx2,  axpy_avx2,       norm_sq_avx2,
                       diff_norm_sq_avx2, bounded_map_avx2, shift_map_avx2};
  return t;
}

} // namespace kob::kernels
