// SPDX-License-Identifier: Apache-2.0
//
// NEON kernels for AArch64. One float64x2_t holds a single complex double.

#include <arm_neon.h>

#include "kernel_tables.hpp"

namespace gfnoma::kernels::detail {
namespace {

inline const double* as_doubles(const cdouble* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cdouble* p) { return reinterpret_cast<double*>(p); }

// alpha * v with v = [vr, vi]: [p*vr - q*vi, p*vi + q*vr]
inline float64x2_t cmul(float64x2_t re, float64x2_t im_signed, float64x2_t v) {
  const float64x2_t swapped = vextq_f64(v, v, 1);
  return vfmaq_f64(vmulq_f64(re, v), im_signed, swapped);
}

inline float64x2_t signed_imag(double q) {
  const double lanes[2] = {-q, q};
  return vld1q_f64(lanes);
}

cdouble dot_neon(const cdouble* a, const cdouble* b, std::size_t n) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(pa + 2 * i);
    const float64x2_t vb = vld1q_f64(pb + 2 * i);
    acc_re = vfmaq_f64(acc_re, va, vb);
    acc_im = vfmaq_f64(acc_im, va, vextq_f64(vb, vb, 1));
  }
  const double re = vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1);
  const double im = vgetq_lane_f64(acc_im, 0) - vgetq_lane_f64(acc_im, 1);
  return {re, im};
}

void axpy_neon(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n) {
  const float64x2_t re = vdupq_n_f64(alpha.real());
  const float64x2_t im = signed_imag(alpha.imag());
  const double* px = as_doubles(x);
  double* py = as_doubles(y);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vy = vld1q_f64(py + 2 * i);
    vst1q_f64(py + 2 * i, vaddq_f64(vy, cmul(re, im, vld1q_f64(px + 2 * i))));
  }
}

double norm2_neon(const cdouble* x, std::size_t n) {
  const double* px = as_doubles(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(px + 2 * i);
    acc = vfmaq_f64(acc, v, v);
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

void transform_pair_neon(cdouble* x, cdouble* y, std::size_t n, const PairTransform& t) {
  const float64x2_t xx_re = vdupq_n_f64(t.xx.real()), xx_im = signed_imag(t.xx.imag());
  const float64x2_t xy_re = vdupq_n_f64(t.xy.real()), xy_im = signed_imag(t.xy.imag());
  const float64x2_t yx_re = vdupq_n_f64(t.yx.real()), yx_im = signed_imag(t.yx.imag());
  const float64x2_t yy_re = vdupq_n_f64(t.yy.real()), yy_im = signed_imag(t.yy.imag());
  double* px = as_doubles(x);
  double* py = as_doubles(y);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(px + 2 * i);
    const float64x2_t vy = vld1q_f64(py + 2 * i);
    vst1q_f64(px + 2 * i, vaddq_f64(cmul(xx_re, xx_im, vx), cmul(xy_re, xy_im, vy)));
    vst1q_f64(py + 2 * i, vaddq_f64(cmul(yx_re, yx_im, vx), cmul(yy_re, yy_im, vy)));
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Isa::neon, dot_neon, axpy_neon, norm2_neon, transform_pair_neon};
  return table;
}

}  // namespace gfnoma::kernels::detail
