// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops used by the eigensolver and the spectral maps.
// Every kernel has a scalar reference implementation; wider backends are
// selected at runtime and must agree with it to rounding (see
// tests/test_kernels.cpp).

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace kob::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

/// Coefficients of a 2x2 complex row operation:
///   x' = a x + b y,  y' = c x + d y.
struct RowOp {
  cplx a, b, c, d;
};

/// Function table implemented once per backend.
struct Table {
  std::string_view name;
  void (*rotate_rows)(cplx *x, cplx *y, std::size_t n, RowOp op);
  void (*axpy)(cplx *y, const cplx *x, std::size_t n, cplx alpha);
  double (*norm_sq)(const cplx *x, std::size_t n);
  double (*diff_norm_sq)(const cplx *x, const cplx *y, std::size_t n);
  void (*bounded_map)(double *v, std::size_t n);
  void (*shift_map)(double *v, std::size_t n, double shift);
};

const Table &scalar_table();
bool available(Backend b);
const Table &table(Backend b);

/// The backend used by the free functions below. Chosen on first use from
/// the KOB_SIMD environment variable ("scalar", "avx2", "auto"), falling
/// back to the widest available backend.
const Table &active();
Backend active_backend();
/// Forces a backend; throws std::invalid_argument if unavailable.
void set_backend(Backend b);

inline void rotate_rows(std::span<cplx> x, std::span<cplx> y, RowOp op) {
  active().rotate_rows(x.data(), y.data(), x.size(), op);
}

/// y += alpha * x
inline void axpy(std::span<cplx> y, std::span<const cplx> x, cplx alpha) {
  active().axpy(y.data(), x.data(), y.size(), alpha);
}

inline double norm_sq(std::span<const cplx> x) {
  return active().norm_sq(x.data(), x.size());
}

inline double diff_norm_sq(std::span<const cplx> x, std::span<const cplx> y) {
  return active().diff_norm_sq(x.data(), y.data(), x.size());
}

/// v[i] <- v[i] / sqrt(1 + v[i]^2)
inline void bounded_map(std::span<double> v) {
  active().bounded_map(v.data(), v.size());
}

/// Piecewise-linear shift: identity for |x| >= 1, otherwise
/// (x - a)/(1 + a) below a and (x - a)/(1 - a) above it.
inline void shift_map(std::span<double> v, double shift) {
  active().shift_map(v.data(), v.size(), shift);
}

} // namespace kob::kernels
