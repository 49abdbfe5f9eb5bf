// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>

#include "gfnoma/common.hpp"

namespace gfnoma {

// Gray-mapped 4-QAM with unit average energy. The first bit of a pair selects
// the sign of the real part, the second the imaginary part, 0 -> +1:
//   00 -> ( 1 + j)/sqrt2   01 -> ( 1 - j)/sqrt2
//   10 -> (-1 + j)/sqrt2   11 -> (-1 - j)/sqrt2
ComplexVector qam_modulate(std::span<const std::uint8_t> bits);

// Max-log LLRs for r = gain * x + n, n ~ CN(0, noise_var):
//   LLR_re = 2 sqrt2 Re(conj(gain) r) / noise_var, LLR_im likewise.
// Magnitudes are clamped to 1e9 so a vanishing noise variance stays finite.
std::array<double, 2> qam_soft_demod(cdouble symbol, cdouble gain, double noise_var);

}  // namespace gfnoma
