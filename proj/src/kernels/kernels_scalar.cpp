// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "kob/kernels.hpp"

namespace kob::kernels {
namespace {

void rotate_rows_scalar(cplx *x, cplx *y, std::size_t n, RowOp op) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = op.a * xi + op.b * yi;
    y[i] = op.c * xi + op.d * yi;
  }
}

void axpy_scalar(cplx *y, const cplx *x, std::size_t n, cplx alpha) {
  for (std::size_t i = 0; i < n; ++i)
    y[i] += alpha * x[i];
}

double norm_sq_scalar(const cplx *x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += std::norm(x[i]);
  return s;
}

double diff_norm_sq_scalar(const cplx *x, const cplx *y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += std::norm(x[i] - y[i]);
  return s;
}

void bounded_map_scalar(double *v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    v[i] = v[i] / std::sqrt(1.0 + v[i] * v[i]);
}

void shift_map_scalar(double *v, std::size_t n, double shift) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i];
    if (std::abs(x) >= 1.0)
      continue;
    v[i] = x <= shift ? (x - shift) / (1.0 + shift) : (x - shift) / (1.0 - shift);
  }
}

} // namespace

const Table &scalar_table() {
  static const Table t{"scalar",          rotate_rows_scalar, axpy_scalar,
                       norm_sq_scalar,    diff_norm_sq_scalar, bounded_map_scalar,
                       shift_map_scalar};
  return t;
}

} // namespace kob::kernels
