// SPDX-License-Identifier: Apache-2.0
//
// Finite-rank mechanics of the kernel-dimension obstruction: bounded
// transform, the shift deformations g_j, spectral counting in (-eps, eps),
// the invertibility cover U_0..U_k, and spectral flow along sampled paths.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kob/linalg.hpp"
#include "kob/parallel.hpp"
#include "kob/tolerances.hpp"

namespace kob::fredholm {

struct Sample {
  std::string id;
  std::optional<std::vector<double>> coords;
  Matrix op;
};

using Edge = std::pair<std::string, std::string>;

/// Parameter points each carrying a Hermitian matrix of a common dimension.
class SampledFamily {
public:
  /// Validates dimensions, unique ids, Hermitian symmetry within h_tol and
  /// edge endpoints, then replaces every matrix by its Hermitian part.
  SampledFamily(std::size_t dim, std::vector<Sample> points, std::vector<Edge> edges = {},
                const Tolerances &tol = default_tolerances());

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Sample> &points() const { return points_; }
  const std::vector<Edge> &edges() const { return edges_; }

  /// Throws InputError for unknown ids.
  std::size_t index_of(const std::string &id) const;

  /// Declares every matrix block diagonal with blocks of this size so that
  /// eigenvalues are computed per block. 0 means dense.
  void set_block_size(std::size_t b);
  std::size_t block_size() const { return block_; }

  /// Eigenvalues (ascending) of point i.
  std::vector<double> eigenvalues(std::size_t i) const;

private:
  std::size_t dim_;
  std::vector<Sample> points_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t block_ = 0;
};

struct PathSpec {
  std::vector<std::string> ids;
  bool closed = false;
};

struct CoverReport {
  int k = 0;
  double epsilon = 0.0;
  std::vector<double> shifts;                ///< a_j = j eps / (k+1)
  std::vector<std::vector<std::string>> sets;  ///< U_0..U_k
  bool covered = false;
  std::vector<std::string> uncovered_ids;
  /// Points where some shifted matrix had its smallest singular value in
  /// the ambiguity band (counted as not invertible).
  std::vector<std::string> indeterminate_ids;
};

/// Throws ValidationError unless |A - A*| <= h_tol entrywise; returns (A + A*)/2.
Matrix validated_hermitian(const Matrix &a, double h_tol);

/// x / sqrt(1 + x^2)
inline double bounded_scalar(double x) { return x / std::sqrt(1.0 + x * x); }

/// F = A (1 + A^2)^{-1/2} through the eigendecomposition.
Matrix bounded_transform(const Matrix &a, const Tolerances &tol = default_tolerances());

/// a_j = j eps / (k + 1).
double shift_value(int j, int k, double epsilon);

/// g_j(F): eigenvalues x with |x| < 1 go to (x - a_j)/(1 + a_j) below a_j and
/// (x - a_j)/(1 - a_j) above; the rest are fixed. Requires 0 <= j <= k,
/// 0 < eps < 1 and |F| <= 1 + h_tol.
Matrix shift_deform(const Matrix &f, int j, int k, double epsilon,
                    const Tolerances &tol = default_tolerances());

/// Number of values strictly inside (-eps, eps). Throws BoundaryAmbiguity
/// when some |value| is within b_tol of eps.
int count_in_window(std::span<const double> values, double epsilon, double b_tol);

int spectral_count(const Matrix &a, double epsilon, const Tolerances &tol = default_tolerances());

CoverReport build_cover(const SampledFamily &fam, int k, double epsilon,
                        const Tolerances &tol = default_tolerances(), unsigned jobs = 1);

/// Net number of eigenvalues crossing zero upwards along the path,
/// n_-(start) - n_-(end) accumulated step by step. Closed paths include the
/// step from the last id back to the first.
int spectral_flow(const SampledFamily &fam, const PathSpec &path, double eta, unsigned jobs = 1);

} // namespace kob::fredholm
