// SPDX-License-Identifier: Apache-2.0

#include "kob/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kob/error.hpp"
#include "kob/kernels.hpp"

namespace kob {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    m(i, i) = d[i];
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      r(j, i) = std::conj((*this)(i, j));
  return r;
}

Matrix &Matrix::operator+=(const Matrix &o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw ValidationError("matrix dimension mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += o.data_[i];
  return *this;
}

Matrix &Matrix::operator-=(const Matrix &o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw ValidationError("matrix dimension mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] -= o.data_[i];
  return *this;
}

Matrix &Matrix::operator*=(cplx s) {
  for (auto &x : data_)
    x *= s;
  return *this;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.rows())
    throw ValidationError("matrix dimension mismatch in *");
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const cplx ail = a(i, l);
      if (ail != cplx{})
        kernels::axpy(r.row(i), b.row(l), ail);
    }
  return r;
}

Matrix shifted(const Matrix &a, double s) {
  Matrix r = a;
  for (std::size_t i = 0; i < std::min(r.rows(), r.cols()); ++i)
    r(i, i) -= s;
  return r;
}

double hermitian_defect(const Matrix &a) {
  if (!a.square())
    return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
  return d;
}

Matrix hermitian_part(const Matrix &a) {
  if (!a.square())
    throw ValidationError("Hermitian part of a non-square matrix");
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    r(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
      r(j, i) = std::conj(r(i, j));
    }
  }
  return r;
}

double frobenius_norm(const Matrix &a) { return std::sqrt(kernels::norm_sq(a.data())); }

double frobenius_distance(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("matrix dimension mismatch in distance");
  return std::sqrt(kernels::diff_norm_sq(a.data(), b.data()));
}

namespace {

double off_diagonal_sq(const Matrix &a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      s += std::norm(a(i, j));
  return 2.0 * s;
}

// Runs cyclic Jacobi sweeps on `a` in place. If `w` is non-null it
// accumulates the adjoint of the eigenvector matrix (rows are conjugated
// eigenvectors).
void jacobi(Matrix &a, Matrix *w) {
  const std::size_t n = a.rows();
  if (n < 2)
    return;
  const double total = kernels::norm_sq(a.data());
  if (total == 0.0)
    return;
  const double eps = std::numeric_limits<double>::epsilon();
  const double target = eps * eps * total;
  constexpr int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_sq(a) <= target)
      return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0)
          continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Below rounding of both diagonal entries: drop it.
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const cplx phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Rows of J* with J = diag(1, conj(phase)) * [[c, s], [-s, c]].
        const kernels::RowOp op{c, -s * phase, s, c * phase};

        kernels::rotate_rows(a.row(p), a.row(q), op);
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q)
            continue;
          a(i, p) = std::conj(a(p, i));
          a(i, q) = std::conj(a(q, i));
        }
        if (w)
          kernels::rotate_rows(w->row(p), w->row(q), op);
      }
    }
  }
  if (off_diagonal_sq(a) > 1e4 * target)
    throw Error("Jacobi eigensolver did not converge");
}

void check_square(const Matrix &a) {
  if (!a.square())
    throw ValidationError("expected a square matrix");
}

} // namespace

EigenDecomposition eigh(const Matrix &a) {
  check_square(a);
  const std::size_t n = a.rows();
  Matrix work = hermitian_part(a);
  Matrix w = Matrix::identity(n);
  jacobi(work, &w);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return work(x, x).real() < work(y, y).real();
  });

  EigenDecomposition ed;
  ed.values.resize(n);
  ed.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    ed.values[k] = work(src, src).real();
    for (std::size_t i = 0; i < n; ++i)
      ed.vectors(i, k) = std::conj(w(src, i));
  }
  return ed;
}

std::vector<double> eigvalsh(const Matrix &a) {
  check_square(a);
  Matrix work = hermitian_part(a);
  jacobi(work, nullptr);
  std::vector<double> v(a.rows());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = work(i, i).real();
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<double> eigvalsh_blocked(const Matrix &a, std::size_t block) {
  check_square(a);
  const std::size_t n = a.rows();
  if (block == 0 || n % block != 0)
    throw ValidationError("block size does not divide the matrix dimension");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i / block != j / block && a(i, j) != cplx{})
        throw ValidationError("matrix is not block diagonal");

  std::vector<double> out;
  out.reserve(n);
  Matrix sub(block, block);
  for (std::size_t b0 = 0; b0 < n; b0 += block) {
    for (std::size_t i = 0; i < block; ++i)
      for (std::size_t j = 0; j < block; ++j)
        sub(i, j) = a(b0 + i, b0 + j);
    const auto v = eigvalsh(sub);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Matrix spectral_compose(const EigenDecomposition &ed, std::span<const double> f) {
  const std::size_t n = ed.values.size();
  if (f.size() != n)
    throw ValidationError("spectral_compose: value count mismatch");
  const Matrix w = ed.vectors.adjoint();
  Matrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (f[k] == 0.0)
      continue;
    for (std::size_t i = 0; i < n; ++i)
      kernels::axpy(r.row(i), w.row(k), f[k] * std::conj(w(k, i)));
  }
  return hermitian_part(r);
}

double hermitian_operator_norm(const Matrix &a) {
  const auto v = eigvalsh(a);
  if (v.empty())
    return 0.0;
  return std::max(std::abs(v.front()), std::abs(v.back()));
}

} // namespace kob
