// SPDX-License-Identifier: Apache-2.0
//
// Twisted Dirac operator -i d/dt on a circle of unit circumference, twisted
// by a flat U(k) bundle with holonomy U. In the Fourier basis e^{2 pi i n t}
// it is block diagonal with blocks 2 pi (n + delta + A), A the Hermitian
// logarithm of U with eigenvalues in [0, 1).

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kob/linalg.hpp"
#include "kob/tolerances.hpp"

namespace kob::circle {

/// Spinor boundary phase: delta = 0 (periodic) or delta = 1/2 (antiperiodic).
enum class SpinStructure { periodic, antiperiodic };

inline double delta_of(SpinStructure s) { return s == SpinStructure::periodic ? 0.0 : 0.5; }
/// Accepts exactly "0" or "1/2".
SpinStructure parse_spin(std::string_view text);
std::string to_string(SpinStructure s);

inline constexpr SpinStructure default_spin = SpinStructure::antiperiodic;

/// Reduces an angle to [0, 1).
double normalize_angle(double theta);

/// Holonomy of a flat twist, either as a k x k unitary or as its eigen-angles.
class HolonomySpec {
public:
  /// Angles are normalized to [0, 1). Throws InputError when empty.
  static HolonomySpec from_angles(std::vector<double> angles);
  /// Throws ValidationError unless `u` is square and unitary within u_tol.
  static HolonomySpec from_matrix(Matrix u, const Tolerances &tol = default_tolerances());

  std::size_t k() const;
  const Matrix *matrix() const { return std::get_if<Matrix>(&rep_); }
  const std::vector<double> *angles() const { return std::get_if<std::vector<double>>(&rep_); }

private:
  explicit HolonomySpec(std::variant<Matrix, std::vector<double>> rep) : rep_(std::move(rep)) {}
  std::variant<Matrix, std::vector<double>> rep_;
};

/// diag(e^{2 pi i theta_j})
Matrix diagonal_unitary(std::span<const double> angles);

/// max_ij |(U U*)_ij - delta_ij|
double unitarity_defect(const Matrix &u);

/// Eigen-angles of a unitary (ascending, in [0, 1)) and orthonormal
/// eigenvectors as columns.
struct UnitaryEigen {
  std::vector<double> angles;
  Matrix vectors;
};

/// Diagonalizes a unitary through Hermitian combinations of U and U*.
/// Throws ValidationError for non-unitary input and Error if a residual
/// exceeds r_tol.
UnitaryEigen unitary_eigen(const Matrix &u, const Tolerances &tol = default_tolerances());

std::vector<double> holonomy_angles(const HolonomySpec &h, const Tolerances &tol = default_tolerances());

/// Hermitian A with eigenvalues in [0, 1) and exp(2 pi i A) = U.
Matrix hermitian_log(const HolonomySpec &h, const Tolerances &tol = default_tolerances());

struct SpectralLine {
  double value;
  int multiplicity;
  bool operator==(const SpectralLine &) const = default;
};

/// Clustered eigenvalues inside (-epsilon, epsilon).
struct SpectrumWindow {
  double epsilon = 0.0;
  std::vector<SpectralLine> lines;

  int total() const;
};

/// Keeps values with |v| < epsilon, sorts, and merges neighbours closer than
/// c_tol (single linkage); each cluster reports its mean.
SpectrumWindow cluster_window(std::span<const double> values, double epsilon, double c_tol);

/// Closed form { 2 pi scale (n + delta + theta_j) } inside the window.
/// Throws InputError unless epsilon > 0.
SpectrumWindow analytic_spectrum(const HolonomySpec &h, SpinStructure s, double epsilon,
                                 const Tolerances &tol = default_tolerances(), double scale = 1.0);

/// #{ j : theta_j + delta is an integer within i_tol }
int kernel_dim(const HolonomySpec &h, SpinStructure s, const Tolerances &tol = default_tolerances());

/// Block-diagonal truncation to Fourier modes n = -N..N (block n + N holds
/// mode n), size k(2N+1). Throws InputError for N < 1.
Matrix fourier_truncation(const HolonomySpec &h, SpinStructure s, int modes,
                          const Tolerances &tol = default_tolerances(), double scale = 1.0);

/// Same ladder for a diagonal holonomy with the given angles taken
/// literally (no reduction to [0, 1)). Used to follow a loop of holonomies
/// continuously past theta = 1.
Matrix dirac_ladder(std::span<const double> angles, SpinStructure s, int modes, double scale = 1.0);

/// Eigenvalues of fourier_truncation, solved one k x k block at a time.
std::vector<double> truncation_eigenvalues(const HolonomySpec &h, SpinStructure s, int modes,
                                           const Tolerances &tol = default_tolerances(),
                                           double scale = 1.0);

} // namespace kob::circle
