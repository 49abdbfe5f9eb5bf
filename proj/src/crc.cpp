// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/crc.hpp"

namespace gfnoma {

std::uint32_t crc24a(std::span<const std::uint8_t> bits) {
  std::uint32_t reg = 0;
  for (const auto b : bits) {
    const std::uint32_t feedback = ((reg >> 23) & 1u) ^ (b & 1u);
    reg = (reg << 1) & 0xFFFFFFu;
    if (feedback) reg ^= kCrc24aPoly;
  }
  return reg;
}

Bits crc_attach(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw InvalidInput("crc_attach: empty message");
  Bits out(bits.begin(), bits.end());
  const std::uint32_t crc = crc24a(bits);
  for (std::size_t i = 0; i < kCrcBits; ++i) out.push_back(static_cast<std::uint8_t>((crc >> (kCrcBits - 1 - i)) & 1u));
  return out;
}

bool crc_check(std::span<const std::uint8_t> bits_with_crc) {
  if (bits_with_crc.size() <= kCrcBits) return false;
  return crc24a(bits_with_crc) == 0;
}

}  // namespace gfnoma
