// SPDX-License-Identifier: Apache-2.0
//
// Seeded generators and independent reference computations shared by the
// test binaries. Nothing here calls into the eigensolver.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "kob/linalg.hpp"

namespace kob::testing {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

using Rng = std::mt19937_64;

inline cplx gaussian_c(Rng &rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

/// Haar-ish unitary from modified Gram-Schmidt on a complex Gaussian matrix.
inline Matrix random_unitary(std::size_t n, Rng &rng) {
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      q(i, j) = gaussian_c(rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      cplx dot{};
      for (std::size_t i = 0; i < n; ++i)
        dot += std::conj(q(i, p)) * q(i, c);
      for (std::size_t i = 0; i < n; ++i)
        q(i, c) -= dot * q(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      nrm += std::norm(q(i, c));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i)
      q(i, c) /= nrm;
  }
  return q;
}

/// V diag(values) V* for a random unitary V.
inline Matrix hermitian_with_spectrum(const std::vector<double> &values, Rng &rng) {
  const Matrix v = random_unitary(values.size(), rng);
  return v * Matrix::diagonal(values) * v.adjoint();
}

inline Matrix random_hermitian(std::size_t n, Rng &rng, double scale = 1.0) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = scale * gaussian_c(rng).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = scale * gaussian_c(rng);
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

inline std::vector<double> uniform_values(std::size_t n, double lo, double hi, Rng &rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto &x : v)
    x = u(rng);
  return v;
}

/// Closed-form twisted circle spectrum by direct enumeration over a wide
/// mode range.
inline std::vector<double> enumerate_ladder(const std::vector<double> &angles, double delta,
                                            double epsilon, long modes = 200) {
  std::vector<double> out;
  for (double t : angles)
    for (long n = -modes; n <= modes; ++n) {
      const double v = two_pi * (static_cast<double>(n) + delta + t);
      if (std::abs(v) < epsilon)
        out.push_back(v);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Reference piecewise-linear g_j.
inline double shift_reference(double x, double a) {
  if (std::abs(x) >= 1.0)
    return x;
  return x <= a ? (x - a) / (1.0 + a) : (x - a) / (1.0 - a);
}

} // namespace kob::testing
