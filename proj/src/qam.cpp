// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/qam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gfnoma {

namespace {
constexpr double kMaxLlr = 1e9;
}

ComplexVector qam_modulate(std::span<const std::uint8_t> bits) {
  if (bits.size() % 2 != 0) throw InvalidInput("qam_modulate: odd number of bits");
  const double a = 1.0 / std::numbers::sqrt2;
  ComplexVector out(bits.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = {bits[2 * i] ? -a : a, bits[2 * i + 1] ? -a : a};
  return out;
}

std::array<double, 2> qam_soft_demod(cdouble symbol, cdouble gain, double noise_var) {
  const cdouble z = std::conj(gain) * symbol;
  const double nv = std::max(noise_var, std::numeric_limits<double>::min());
  const double k = 2.0 * std::numbers::sqrt2 / nv;
  return {std::clamp(k * z.real(), -kMaxLlr, kMaxLlr), std::clamp(k * z.imag(), -kMaxLlr, kMaxLlr)};
}

}  // namespace gfnoma
