// SPDX-License-Identifier: Apache-2.0
#pragma once

// Small dense complex linear algebra, sized for matrices of dimension <= 32.

#include <span>
#include <vector>

#include "gfnoma/common.hpp"

namespace gfnoma {

// Dense complex matrix. Storage is column-major so that columns (signatures,
// eigenvectors) are contiguous spans.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_columns(const std::vector<ComplexVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cdouble& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<cdouble> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const cdouble> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  std::span<const cdouble> data() const { return data_; }
  std::span<cdouble> data() { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cdouble s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexVector operator*(const ComplexMatrix& lhs, std::span<const cdouble> rhs);
ComplexMatrix operator*(cdouble s, ComplexMatrix m);

ComplexMatrix adjoint(const ComplexMatrix& m);
// A^H A
ComplexMatrix gram(const ComplexMatrix& a);
// A^H y
ComplexVector adjoint_times(const ComplexMatrix& a, std::span<const cdouble> y);
ComplexMatrix select_columns(const ComplexMatrix& m, std::span<const std::size_t> columns);

double max_abs(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);
// max |M - M^H|
double hermitian_defect(const ComplexMatrix& m);

// Entrywise product; throws DimensionError on shape mismatch.
ComplexMatrix hadamard(const ComplexMatrix& x, const ComplexMatrix& y);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // column i pairs with eigenvalues[i]
};

// Cyclic Jacobi on a Hermitian matrix. Throws DimensionError for non-square or
// empty input and InvalidInput when max|R - R^H| > 1e-12 * max|R|.
EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& r);

// Cholesky factor of a Hermitian positive definite matrix.
class Cholesky {
 public:
  explicit Cholesky(const ComplexMatrix& hpd);
  ComplexVector solve(std::span<const cdouble> b) const;
  ComplexMatrix solve(const ComplexMatrix& b) const;
  std::size_t dim() const { return lower_.rows(); }

 private:
  ComplexMatrix lower_;
};

// Factorizes A^H A once so that many right-hand sides can share it.
class LeastSquares {
 public:
  // Rank guard: throws RankDeficient when the smallest eigenvalue of A^H A is
  // below 1e-10 times the largest.
  explicit LeastSquares(const ComplexMatrix& a);
  ComplexVector solve(std::span<const cdouble> y) const;
  // [(A^H A)^{-1}]_{kk}
  std::vector<double> normal_inverse_diagonal() const;

 private:
  ComplexMatrix a_;
  ComplexMatrix normal_;
  Cholesky chol_;
};

// (A^H A)^{-1} A^H y for tall full-column-rank A.
ComplexVector least_squares_solve(const ComplexMatrix& a, std::span<const cdouble> y);

}  // namespace gfnoma
