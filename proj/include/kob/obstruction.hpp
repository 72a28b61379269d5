// SPDX-License-Identifier: Apache-2.0
//
// End-to-end check of the kernel-dimension obstruction on the tautological
// family of twisted circle Dirac operators over the maximal torus of U(k).
// The top cup product c_1 ... c_k is nonzero, so no epsilon may leave every
// grid point with fewer than k eigenvalues in (-eps, eps).

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kob/circle_dirac.hpp"
#include "kob/fredholm_family.hpp"
#include "kob/tolerances.hpp"

namespace kob::obstruction {

inline constexpr std::size_t max_grid_points = 1'000'000;

/// Grid {(i_1/m, ..., i_k/m)} on the torus of diagonal holonomies.
struct TorusGridSpec {
  int k = 1;
  int resolution = 2;  ///< m, points per angle
  circle::SpinStructure spin = circle::default_spin;
  int truncation = 1;  ///< N, Fourier modes -N..N
  bool diagonal_only = true;
  double scale = 1.0;
  /// Grid index tuples left out of the sample.
  std::vector<std::vector<int>> excluded;

  /// Throws InputError on k < 1, m < 2, N < 1 or more than max_grid_points points.
  void validate() const;
  std::size_t grid_size() const;
};

/// "i1_i2_..._ik"
std::string grid_id(std::span<const int> index);
/// Inverse of grid_id; throws InputError on malformed ids.
std::vector<int> parse_grid_id(const std::string &id, int k, int resolution);

/// Holonomy at a grid index: diag(e^{2 pi i theta}) or, when diagonal_only
/// is false, that diagonal conjugated by the normalized k x k DFT matrix.
circle::HolonomySpec grid_holonomy(const TorusGridSpec &spec, std::span<const int> index);

/// One sample per (non-excluded) grid point, in lexicographic index order,
/// with wrap-around neighbour edges. Matrices are marked block diagonal.
fredholm::SampledFamily tautological_family(const TorusGridSpec &spec,
                                            const Tolerances &tol = default_tolerances());

struct EpsilonVerdict {
  double epsilon = 0.0;
  double window = 0.0;  ///< epsilon, or phi(epsilon) in bounded mode
  int max_count = 0;
  std::string witness_id;
  std::vector<double> witness_coords;
  int witness_kernel_dim = 0;
  bool cover_ok = false;
  bool pass = false;
};

struct ObstructionVerdict {
  TorusGridSpec grid;
  bool bounded = false;
  std::string cohomology_product;
  bool cohomology_product_nonzero = false;
  std::vector<EpsilonVerdict> per_epsilon;
  /// Index into per_epsilon of the smallest epsilon.
  std::size_t reported = 0;
  bool pass = false;
  std::string note;
  Tolerances tolerances;
};

struct VerifyOptions {
  bool bounded = false;  ///< count on bounded_transform(A) with window phi(eps)
  unsigned jobs = 1;
  Tolerances tol;
};

/// Passes iff the top product is nonzero and every epsilon has a grid point
/// with at least k eigenvalues in the window. Among maximizing points the
/// witness has the largest kernel dimension, then the smallest index.
ObstructionVerdict verify_contrapositive(const TorusGridSpec &spec, std::span<const double> epsilons,
                                         const VerifyOptions &opt = {});

/// Closed loop along coordinate j (1-based) with the other angles held at
/// the grid value nearest 1/4.
fredholm::PathSpec generator_loop(const TorusGridSpec &spec, int j);

/// Spectral flow of the truncated Dirac family around a loop of grid points,
/// following the angles continuously (the closing step lands on theta + 1,
/// not back on theta). eta defaults to 1.25 times the step norm.
int c1_pairing(const TorusGridSpec &spec, const fredholm::PathSpec &loop,
               std::optional<double> eta = std::nullopt, unsigned jobs = 1);

/// Fixed-width table: epsilon, max_count, witness, kernel_dim, cover, pass.
std::string summary_table(const ObstructionVerdict &v);

} // namespace kob::obstruction
