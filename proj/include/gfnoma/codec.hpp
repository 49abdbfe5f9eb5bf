// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>

#include "gfnoma/common.hpp"

namespace gfnoma {

enum class CodeRate { half, two_thirds };

std::string to_string(CodeRate rate);
CodeRate parse_code_rate(std::string_view text);  // "1/2" or "2/3"

// Channel code plug point. LLRs follow the ln(P(b=0)/P(b=1)) convention.
class ChannelCodec {
 public:
  virtual ~ChannelCodec() = default;
  virtual std::string name() const = 0;
  // Both throw DimensionError for lengths outside the rate-matching grid.
  virtual std::size_t encoded_length(std::size_t info_bits) const = 0;
  virtual std::size_t decoded_length(std::size_t coded_bits) const = 0;
  virtual Bits encode(std::span<const std::uint8_t> bits) const = 0;
  virtual Bits decode(std::span<const double> llrs) const = 0;
};

// Tail-biting convolutional code, constraint length 7, generators 133/171
// (octal), optionally punctured to rate 2/3 with pattern [11 10]. Decoding is
// soft-input Viterbi with wrap-around traceback.
class ConvolutionalCodec final : public ChannelCodec {
 public:
  explicit ConvolutionalCodec(CodeRate rate) : rate_(rate) {}

  std::string name() const override;
  std::size_t encoded_length(std::size_t info_bits) const override;
  std::size_t decoded_length(std::size_t coded_bits) const override;
  Bits encode(std::span<const std::uint8_t> bits) const override;
  Bits decode(std::span<const double> llrs) const override;

  CodeRate rate() const { return rate_; }

 private:
  CodeRate rate_;
};

std::unique_ptr<ChannelCodec> make_codec(CodeRate rate);

Bits fec_encode(std::span<const std::uint8_t> bits, CodeRate rate);
Bits fec_decode(std::span<const double> llrs, CodeRate rate);

}  // namespace gfnoma
