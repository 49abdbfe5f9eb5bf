// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gfnoma/kernels.hpp"

namespace gfnoma {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(const std::vector<ComplexVector>& columns) {
  if (columns.empty()) return {};
  ComplexMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != m.rows()) throw DimensionError("from_columns: ragged columns");
    std::copy(columns[c].begin(), columns[c].end(), m.col(c).begin());
  }
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix +: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix -: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(cdouble s, ComplexMatrix m) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionError("matrix *: inner dimensions differ");
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    auto dst = out.col(c);
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const cdouble w = rhs(k, c);
      if (w != 0.0) kernels::axpy(w, lhs.col(k), dst);
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& lhs, std::span<const cdouble> rhs) {
  if (lhs.cols() != rhs.size()) throw DimensionError("matrix-vector *: dimension mismatch");
  ComplexVector out(lhs.rows());
  for (std::size_t k = 0; k < lhs.cols(); ++k) kernels::axpy(rhs[k], lhs.col(k), out);
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) out(c, r) = std::conj(m(r, c));
  return out;
}

ComplexMatrix gram(const ComplexMatrix& a) {
  const std::size_t n = a.cols();
  ComplexMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    g(j, j) = kernels::norm2(a.col(j));
    for (std::size_t i = 0; i < j; ++i) {
      const cdouble v = kernels::dot(a.col(i), a.col(j));
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

ComplexVector adjoint_times(const ComplexMatrix& a, std::span<const cdouble> y) {
  if (a.rows() != y.size()) throw DimensionError("adjoint_times: dimension mismatch");
  ComplexVector out(a.cols());
  for (std::size_t k = 0; k < a.cols(); ++k) out[k] = kernels::dot(a.col(k), y);
  return out;
}

ComplexMatrix select_columns(const ComplexMatrix& m, std::span<const std::size_t> columns) {
  ComplexMatrix out(m.rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= m.cols()) throw DimensionError("select_columns: index out of range");
    std::copy(m.col(columns[j]).begin(), m.col(columns[j]).end(), out.col(j).begin());
  }
  return out;
}

double max_abs(const ComplexMatrix& m) {
  double best = 0.0;
  for (const auto& v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

double frobenius_norm(const ComplexMatrix& m) {
  return std::sqrt(kernels::norm2(m.data()));
}

double hermitian_defect(const ComplexMatrix& m) {
  if (!m.square()) throw DimensionError("hermitian_defect: matrix is not square");
  double worst = 0.0;
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r <= c; ++r) worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
  return worst;
}

ComplexMatrix hadamard(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("hadamard: shape mismatch");
  ComplexMatrix out(x.rows(), x.cols());
  auto dst = out.data();
  auto a = x.data();
  auto b = y.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] * b[i];
  return out;
}

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// Zeroes a(p, q) with the unitary V = D * J, where D rotates the phase of
// column q so that the pivot is real and J is the real Jacobi rotation.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cdouble apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cdouble phase = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cdouble conj_phase = std::conj(phase);
  const kernels::PairTransform xf{c, -s * conj_phase, s, c * conj_phase};

  kernels::transform_pair(a.col(p), a.col(q), xf);
  kernels::transform_pair(v.col(p), v.col(q), xf);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    a(p, k) = std::conj(a(k, p));
    a(q, k) = std::conj(a(k, q));
  }
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

}  // namespace

EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& r) {
  if (!r.square() || r.rows() == 0) throw DimensionError("hermitian_eigendecompose: need a non-empty square matrix");
  const double scale = max_abs(r);
  if (hermitian_defect(r) > kHermitianTolerance * scale)
    throw InvalidInput("hermitian_eigendecompose: matrix is not Hermitian");

  const std::size_t n = r.rows();
  ComplexMatrix a(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) a(i, c) = 0.5 * (r(i, c) + std::conj(r(c, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double norm = frobenius_norm(a);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiTolerance * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    std::copy(v.col(order[k]).begin(), v.col(order[k]).end(), out.eigenvectors.col(k).begin());
  }
  return out;
}

Cholesky::Cholesky(const ComplexMatrix& hpd) : lower_(hpd.rows(), hpd.cols()) {
  if (!hpd.square()) throw DimensionError("Cholesky: matrix is not square");
  const std::size_t n = hpd.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = hpd(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(lower_(j, k));
    if (!(d > 0.0)) throw RankDeficient("Cholesky: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    lower_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cdouble s = hpd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * std::conj(lower_(j, k));
      lower_(i, j) = s / ljj;
    }
  }
}

ComplexVector Cholesky::solve(std::span<const cdouble> b) const {
  const std::size_t n = lower_.rows();
  if (b.size() != n) throw DimensionError("Cholesky::solve: dimension mismatch");
  ComplexVector x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    cdouble s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * x[k];
    x[i] = s / lower_(i, i).real();
  }
  for (std::size_t i = n; i-- > 0;) {
    cdouble s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(lower_(k, i)) * x[k];
    x[i] = s / lower_(i, i).real();
  }
  return x;
}

ComplexMatrix Cholesky::solve(const ComplexMatrix& b) const {
  ComplexMatrix out(b.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    const auto x = solve(b.col(c));
    std::copy(x.begin(), x.end(), out.col(c).begin());
  }
  return out;
}

namespace {

ComplexMatrix checked_normal(const ComplexMatrix& a) {
  if (a.cols() == 0 || a.rows() < a.cols())
    throw DimensionError("least squares: matrix must be tall with at least one column");
  ComplexMatrix normal = gram(a);
  const auto eig = hermitian_eigendecompose(normal);
  const double largest = eig.eigenvalues.front();
  const double smallest = eig.eigenvalues.back();
  if (!(largest > 0.0) || smallest < 1e-10 * largest)
    throw RankDeficient("least squares: matrix is rank deficient");
  return normal;
}

}  // namespace

LeastSquares::LeastSquares(const ComplexMatrix& a) : a_(a), normal_(checked_normal(a)), chol_(normal_) {}

ComplexVector LeastSquares::solve(std::span<const cdouble> y) const {
  return chol_.solve(adjoint_times(a_, y));
}

std::vector<double> LeastSquares::normal_inverse_diagonal() const {
  const auto inv = chol_.solve(ComplexMatrix::identity(normal_.rows()));
  std::vector<double> d(inv.rows());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = inv(i, i).real();
  return d;
}

ComplexVector least_squares_solve(const ComplexMatrix& a, std::span<const cdouble> y) {
  return LeastSquares(a).solve(y);
}

}  // namespace gfnoma
