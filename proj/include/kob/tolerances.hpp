// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace kob {

/// Numerical thresholds shared by every module. Successive checks are an
/// order of magnitude apart.
struct Tolerances {
  double u_tol = 1e-10;   ///< unitarity, max |U U* - I|
  double r_tol = 1e-9;    ///< eigen-residual |U v - lambda v|
  double c_tol = 1e-8;    ///< multiplicity clustering
  double i_tol = 1e-8;    ///< integrality of theta + delta
  double h_tol = 1e-10;   ///< Hermitian symmetry, max |A - A*|
  double inv_tol = 1e-8;  ///< smallest singular value for invertibility
  double b_tol = 1e-8;    ///< distance of an eigenvalue to a window edge
};

inline const Tolerances &default_tolerances() {
  static const Tolerances t{};
  return t;
}

} // namespace kob
