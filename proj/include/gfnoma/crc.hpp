// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "gfnoma/common.hpp"

namespace gfnoma {

// CRC-24A: generator 0x864CFB, zero initial register, no output inversion.
inline constexpr std::uint32_t kCrc24aPoly = 0x864CFB;
inline constexpr std::size_t kCrcBits = 24;

// Remainder of the message (one bit per byte, 0/1) over the generator.
std::uint32_t crc24a(std::span<const std::uint8_t> bits);

// Appends the 24 CRC bits, most significant first. Throws InvalidInput on
// empty input.
Bits crc_attach(std::span<const std::uint8_t> bits);

// True when the trailing 24 bits match the CRC of the preceding bits.
bool crc_check(std::span<const std::uint8_t> bits_with_crc);

}  // namespace gfnoma
