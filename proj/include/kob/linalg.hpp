// SPDX-License-Identifier: Apache-2.0
//
// Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian
// input. Sizes in this project stay below a few hundred, where Jacobi is
// accurate to a few ulps of the norm and simple to vectorize row-wise.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kob {

using cplx = std::complex<double>;

/// Row-major dense complex matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix zeros(std::size_t n) { return Matrix(n, n); }
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  Matrix adjoint() const;

  Matrix &operator+=(const Matrix &o);
  Matrix &operator-=(const Matrix &o);
  Matrix &operator*=(cplx s);

  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix &a, const Matrix &b);

  bool operator==(const Matrix &) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Returns A - s I.
Matrix shifted(const Matrix &a, double s);

/// max_ij |A_ij - conj(A_ji)|; infinity for non-square input.
double hermitian_defect(const Matrix &a);

/// (A + A*)/2
Matrix hermitian_part(const Matrix &a);

double frobenius_norm(const Matrix &a);
double frobenius_distance(const Matrix &a, const Matrix &b);

/// Eigenpairs of a Hermitian matrix; values ascending, eigenvectors stored
/// as the columns of `vectors`.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic complex Jacobi. Only the Hermitian part of `a` is used.
EigenDecomposition eigh(const Matrix &a);
std::vector<double> eigvalsh(const Matrix &a);

/// Eigenvalues of a block-diagonal Hermitian matrix, solved one diagonal
/// block of size `block` at a time. Throws ValidationError if any entry
/// outside the diagonal blocks is nonzero.
std::vector<double> eigvalsh_blocked(const Matrix &a, std::size_t block);

/// V diag(f) V* for the eigenvectors V of `ed`.
Matrix spectral_compose(const EigenDecomposition &ed, std::span<const double> f);

/// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_operator_norm(const Matrix &a);

} // namespace kob
