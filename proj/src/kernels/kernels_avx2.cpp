// SPDX-License-Identifier: Apache-2.0
//
// AVX2 + FMA kernels. One __m256d holds two interleaved complex doubles
// [re0, im0, re1, im1]. Built with -mavx2 -mfma; only reached after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "kernel_tables.hpp"

namespace gfnoma::kernels::detail {
namespace {

inline const double* as_doubles(const cdouble* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cdouble* p) { return reinterpret_cast<double*>(p); }

// alpha * v for two packed complex values, alpha given as broadcast re/im.
inline __m256d cmul(__m256d re, __m256d im, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(re, v, _mm256_mul_pd(im, swapped));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cdouble dot_avx2(const cdouble* a, const cdouble* b, std::size_t n) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_im);
  }
  // acc_im lanes hold [ar*bi, ai*br, ...]; the imaginary part is even minus odd.
  const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  double re = hsum(acc_re);
  double im = hsum(_mm256_mul_pd(acc_im, sign));
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void axpy_avx2(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n) {
  const __m256d re = _mm256_set1_pd(alpha.real());
  const __m256d im = _mm256_set1_pd(alpha.imag());
  const double* px = as_doubles(x);
  double* py = as_doubles(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul(re, im, vx)));
  }
  const double p = alpha.real(), q = alpha.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (p * xr - q * xi), y[i].imag() + (p * xi + q * xr)};
  }
}

double norm2_avx2(const cdouble* x, std::size_t n) {
  const double* px = as_doubles(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(px + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void transform_pair_avx2(cdouble* x, cdouble* y, std::size_t n, const PairTransform& t) {
  const __m256d xx_re = _mm256_set1_pd(t.xx.real()), xx_im = _mm256_set1_pd(t.xx.imag());
  const __m256d xy_re = _mm256_set1_pd(t.xy.real()), xy_im = _mm256_set1_pd(t.xy.imag());
  const __m256d yx_re = _mm256_set1_pd(t.yx.real()), yx_im = _mm256_set1_pd(t.yx.imag());
  const __m256d yy_re = _mm256_set1_pd(t.yy.real()), yy_im = _mm256_set1_pd(t.yy.imag());
  double* px = as_doubles(x);
  double* py = as_doubles(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    const __m256d nx = _mm256_add_pd(cmul(xx_re, xx_im, vx), cmul(xy_re, xy_im, vy));
    const __m256d ny = _mm256_add_pd(cmul(yx_re, yx_im, vx), cmul(yy_re, yy_im, vy));
    _mm256_storeu_pd(px + 2 * i, nx);
    _mm256_storeu_pd(py + 2 * i, ny);
  }
  for (; i < n; ++i) {
    const cdouble xv = x[i], yv = y[i];
    const auto mul = [](cdouble a, cdouble b) {
      return cdouble{a.real() * b.real() - a.imag() * b.imag(),
                     a.real() * b.imag() + a.imag() * b.real()};
    };
    x[i] = mul(t.xx, xv) + mul(t.xy, yv);
    y[i] = mul(t.yx, xv) + mul(t.yy, yv);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::avx2, dot_avx2, axpy_avx2, norm2_avx2, transform_pair_avx2};
  return table;
}

}  // namespace gfnoma::kernels::detail
