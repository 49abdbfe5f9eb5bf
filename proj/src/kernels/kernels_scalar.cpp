// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Arithmetic is spelled out on real/imaginary parts so the
// result does not depend on how the standard library implements complex
// multiplication.

#include "kernel_tables.hpp"

namespace gfnoma::kernels::detail {
namespace {

cdouble dot_scalar(const cdouble* a, const cdouble* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void axpy_scalar(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n) {
  const double p = alpha.real(), q = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (p * xr - q * xi), y[i].imag() + (p * xi + q * xr)};
  }
}

double norm2_scalar(const cdouble* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

inline cdouble mul(cdouble a, cdouble b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void transform_pair_scalar(cdouble* x, cdouble* y, std::size_t n, const PairTransform& t) {
  for (std::size_t i = 0; i < n; ++i) {
    const cdouble xv = x[i], yv = y[i];
    x[i] = mul(t.xx, xv) + mul(t.xy, yv);
    y[i] = mul(t.yx, xv) + mul(t.yy, yv);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, dot_scalar, axpy_scalar, norm2_scalar,
                                 transform_pair_scalar};
  return table;
}

}  // namespace gfnoma::kernels::detail
