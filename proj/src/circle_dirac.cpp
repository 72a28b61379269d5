// SPDX-License-Identifier: Apache-2.0

#include "kob/circle_dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "kob/error.hpp"

namespace kob::circle {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
} // namespace

SpinStructure parse_spin(std::string_view text) {
  if (text == "0")
    return SpinStructure::periodic;
  if (text == "1/2")
    return SpinStructure::antiperiodic;
  throw InputError("spin structure must be \"0\" or \"1/2\", got \"" + std::string(text) + "\"");
}

std::string to_string(SpinStructure s) { return s == SpinStructure::periodic ? "0" : "1/2"; }

double normalize_angle(double theta) {
  if (!std::isfinite(theta))
    throw InputError("holonomy angle is not finite");
  double r = theta - std::floor(theta);
  if (r >= 1.0)
    r = 0.0;
  return r;
}

HolonomySpec HolonomySpec::from_angles(std::vector<double> angles) {
  if (angles.empty())
    throw InputError("holonomy needs k >= 1 angles");
  for (double &a : angles)
    a = normalize_angle(a);
  return HolonomySpec(std::move(angles));
}

HolonomySpec HolonomySpec::from_matrix(Matrix u, const Tolerances &tol) {
  if (u.rows() == 0 || !u.square())
    throw ValidationError("holonomy matrix must be square with k >= 1");
  const double d = unitarity_defect(u);
  if (!(d <= tol.u_tol))
    throw ValidationError("holonomy matrix is not unitary (defect " + std::to_string(d) + ")");
  return HolonomySpec(std::move(u));
}

std::size_t HolonomySpec::k() const {
  if (const auto *m = matrix())
    return m->rows();
  return angles()->size();
}

Matrix diagonal_unitary(std::span<const double> angles) {
  Matrix u(angles.size(), angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i)
    u(i, i) = std::polar(1.0, two_pi * angles[i]);
  return u;
}

double unitarity_defect(const Matrix &u) {
  if (!u.square())
    return std::numeric_limits<double>::infinity();
  const Matrix p = u * u.adjoint();
  double d = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      d = std::max(d, std::abs(p(i, j) - (i == j ? cplx(1.0) : cplx(0.0))));
  return d;
}

namespace {

// Groups of indices into `values` (ascending) whose neighbours are within gap.
std::vector<std::vector<std::size_t>> clusters(const std::vector<double> &values, double gap) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] - values[i - 1] > gap)
      out.emplace_back();
    out.back().push_back(i);
  }
  return out;
}

// Orthonormal eigenvectors of a normal matrix. The Hermitian combination
// (e^{-i g} U + e^{i g} U*)/2 has eigenvalues cos(2 pi theta - g); two
// different angles collide only for special g, so clusters are resolved by
// recursing on the compressed matrix with the next g.
Matrix diagonalize_normal(const Matrix &u) {
  const std::size_t n = u.rows();
  if (n == 1)
    return Matrix::identity(1);

  cplx mean{};
  for (std::size_t i = 0; i < n; ++i)
    mean += u(i, i);
  mean /= static_cast<double>(n);
  if (frobenius_distance(u, Matrix::identity(n) * mean) <= 1e-13 * static_cast<double>(n))
    return Matrix::identity(n);

  static constexpr double offsets[] = {0.6180339887498949, 2.2360679774997896, 1.4142135623730951,
                                       2.718281828459045, 0.3010299956639812};
  constexpr double separation = 1e-5;
  const Matrix ua = u.adjoint();
  EigenDecomposition ed;
  for (double g : offsets) {
    const cplx w = std::polar(0.5, -g);
    const Matrix h = hermitian_part(u * w + ua * std::conj(w));
    ed = eigh(h);
    const auto groups = clusters(ed.values, separation);
    if (groups.size() == 1)
      continue;
    Matrix v = ed.vectors;
    for (const auto &grp : groups) {
      if (grp.size() == 1)
        continue;
      const std::size_t m = grp.size();
      Matrix basis(n, m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < m; ++c)
          basis(i, c) = v(i, grp[c]);
      const Matrix compressed = basis.adjoint() * u * basis;
      const Matrix rotated = basis * diagonalize_normal(compressed);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < m; ++c)
          v(i, grp[c]) = rotated(i, c);
    }
    return v;
  }
  return ed.vectors;
}

} // namespace

UnitaryEigen unitary_eigen(const Matrix &u, const Tolerances &tol) {
  if (u.rows() == 0 || !u.square())
    throw ValidationError("holonomy matrix must be square with k >= 1");
  if (!(unitarity_defect(u) <= tol.u_tol))
    throw ValidationError("holonomy matrix is not unitary within u_tol");
  const std::size_t n = u.rows();
  const Matrix v = diagonalize_normal(u);

  std::vector<double> angles(n);
  std::vector<cplx> col(n), uc(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i)
      col[i] = v(i, c);
    cplx rayleigh{};
    for (std::size_t i = 0; i < n; ++i) {
      uc[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        uc[i] += u(i, j) * col[j];
      rayleigh += std::conj(col[i]) * uc[i];
    }
    angles[c] = normalize_angle(std::arg(rayleigh) / two_pi);
    const cplx lambda = std::polar(1.0, two_pi * angles[c]);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      res += std::norm(uc[i] - lambda * col[i]);
    if (std::sqrt(res) > tol.r_tol)
      throw Error("unitary eigen-residual " + std::to_string(std::sqrt(res)) + " exceeds r_tol");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });
  UnitaryEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.angles[c] = angles[order[c]];
    for (std::size_t i = 0; i < n; ++i)
      out.vectors(i, c) = v(i, order[c]);
  }
  return out;
}

std::vector<double> holonomy_angles(const HolonomySpec &h, const Tolerances &tol) {
  if (const auto *a = h.angles()) {
    std::vector<double> out = *a;
    std::sort(out.begin(), out.end());
    return out;
  }
  return unitary_eigen(*h.matrix(), tol).angles;
}

Matrix hermitian_log(const HolonomySpec &h, const Tolerances &tol) {
  if (const auto *a = h.angles())
    return Matrix::diagonal(*a);
  const UnitaryEigen ue = unitary_eigen(*h.matrix(), tol);
  return spectral_compose({ue.angles, ue.vectors}, ue.angles);
}

int SpectrumWindow::total() const {
  int t = 0;
  for (const auto &l : lines)
    t += l.multiplicity;
  return t;
}

SpectrumWindow cluster_window(std::span<const double> values, double epsilon, double c_tol) {
  std::vector<double> inside;
  for (double v : values)
    if (std::abs(v) < epsilon)
      inside.push_back(v);
  std::sort(inside.begin(), inside.end());
  SpectrumWindow w{epsilon, {}};
  for (const auto &grp : clusters(inside, c_tol)) {
    double sum = 0.0;
    for (std::size_t i : grp)
      sum += inside[i];
    w.lines.push_back({sum / static_cast<double>(grp.size()), static_cast<int>(grp.size())});
  }
  return w;
}

SpectrumWindow analytic_spectrum(const HolonomySpec &h, SpinStructure s, double epsilon,
                                 const Tolerances &tol, double scale) {
  if (!(epsilon > 0.0))
    throw InputError("epsilon must be positive");
  if (!(scale > 0.0))
    throw InputError("scale must be positive");
  const double delta = delta_of(s);
  const double quantum = two_pi * scale;
  const double reach = epsilon / quantum;
  std::vector<double> values;
  for (double theta : holonomy_angles(h, tol)) {
    const auto lo = static_cast<long>(std::floor(-reach - delta - theta)) - 1;
    const auto hi = static_cast<long>(std::ceil(reach - delta - theta)) + 1;
    for (long n = lo; n <= hi; ++n) {
      const double v = quantum * (static_cast<double>(n) + delta + theta);
      if (std::abs(v) < epsilon)
        values.push_back(v);
    }
  }
  return cluster_window(values, epsilon, tol.c_tol);
}

int kernel_dim(const HolonomySpec &h, SpinStructure s, const Tolerances &tol) {
  const double delta = delta_of(s);
  int count = 0;
  for (double theta : holonomy_angles(h, tol)) {
    const double x = theta + delta;
    if (std::abs(x - std::round(x)) <= tol.i_tol)
      ++count;
  }
  return count;
}

namespace {

Matrix ladder_from_log(const Matrix &log_u, SpinStructure s, int modes, double scale) {
  if (modes < 1)
    throw InputError("truncation needs N >= 1 Fourier modes");
  if (!(scale > 0.0))
    throw InputError("scale must be positive");
  const std::size_t k = log_u.rows();
  const std::size_t blocks = 2 * static_cast<std::size_t>(modes) + 1;
  const double delta = delta_of(s);
  const double quantum = two_pi * scale;
  Matrix d(k * blocks, k * blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const double n = static_cast<double>(static_cast<long>(b) - modes);
    const std::size_t off = b * k;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        d(off + i, off + j) = quantum * log_u(i, j);
    for (std::size_t i = 0; i < k; ++i)
      d(off + i, off + i) += quantum * (n + delta);
  }
  return d;
}

} // namespace

Matrix fourier_truncation(const HolonomySpec &h, SpinStructure s, int modes, const Tolerances &tol,
                          double scale) {
  return ladder_from_log(hermitian_log(h, tol), s, modes, scale);
}

Matrix dirac_ladder(std::span<const double> angles, SpinStructure s, int modes, double scale) {
  if (angles.empty())
    throw InputError("holonomy needs k >= 1 angles");
  return ladder_from_log(Matrix::diagonal(angles), s, modes, scale);
}

std::vector<double> truncation_eigenvalues(const HolonomySpec &h, SpinStructure s, int modes,
                                           const Tolerances &tol, double scale) {
  return eigvalsh_blocked(fourier_truncation(h, s, modes, tol, scale), h.k());
}

} // namespace kob::circle
