// SPDX-License-Identifier: Apache-2.0
#pragma once

// Complex double inner-loop kernels with a scalar reference implementation and
// SIMD variants (AVX2+FMA on x86-64, NEON on AArch64) picked at runtime.
//
// Every variant must agree with the scalar reference to rounding; the
// equivalence tests in tests/unit/test_kernels.cpp pin that down.

#include <optional>
#include <span>
#include <string_view>

#include "gfnoma/common.hpp"

namespace gfnoma::kernels {

enum class Isa { scalar, avx2, neon };

// 2x2 complex transform applied to a pair of vectors:
//   x' = xx * x + xy * y
//   y' = yx * x + yy * y
struct PairTransform {
  cdouble xx, xy, yx, yy;
};

struct KernelTable {
  Isa isa;
  // sum_i conj(a_i) * b_i
  cdouble (*dot)(const cdouble* a, const cdouble* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n);
  // sum_i |x_i|^2
  double (*norm2)(const cdouble* x, std::size_t n);
  void (*transform_pair)(cdouble* x, cdouble* y, std::size_t n, const PairTransform& t);
};

bool isa_supported(Isa isa);
Isa best_available();

// Throws InvalidInput when the ISA is not compiled in or not supported by the CPU.
const KernelTable& table(Isa isa);

const KernelTable& active();
void select(Isa isa);

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

inline cdouble dot(std::span<const cdouble> a, std::span<const cdouble> b) {
  if (a.size() != b.size()) throw DimensionError("kernels::dot: length mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(cdouble alpha, std::span<const cdouble> x, std::span<cdouble> y) {
  if (x.size() != y.size()) throw DimensionError("kernels::axpy: length mismatch");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double norm2(std::span<const cdouble> x) { return active().norm2(x.data(), x.size()); }

inline void transform_pair(std::span<cdouble> x, std::span<cdouble> y, const PairTransform& t) {
  if (x.size() != y.size()) throw DimensionError("kernels::transform_pair: length mismatch");
  active().transform_pair(x.data(), y.data(), x.size(), t);
}

}  // namespace gfnoma::kernels
