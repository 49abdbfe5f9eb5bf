// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/codec.hpp"

#include <array>
#include <bit>
#include <limits>

namespace gfnoma {

namespace {

constexpr unsigned kConstraint = 7;
constexpr unsigned kStates = 1u << (kConstraint - 1);
constexpr unsigned kGen0 = 0133;
constexpr unsigned kGen1 = 0171;
// Extra trellis steps taken on each side of the block for tail-biting decoding.
constexpr std::size_t kWrap = 48;

// Register layout: bit 6 holds the newest input, bits 5..0 the state (most
// recent previous input in bit 5).
inline std::array<std::uint8_t, 2> outputs(unsigned state, unsigned bit) {
  const unsigned reg = (bit << 6) | state;
  return {static_cast<std::uint8_t>(std::popcount(reg & kGen0) & 1),
          static_cast<std::uint8_t>(std::popcount(reg & kGen1) & 1)};
}

inline unsigned next_state(unsigned state, unsigned bit) { return (bit << 5) | (state >> 1); }

struct Trellis {
  // out[state][bit] packed as two bits
  std::array<std::array<std::array<std::uint8_t, 2>, 2>, kStates> out{};
  Trellis() {
    for (unsigned s = 0; s < kStates; ++s)
      for (unsigned b = 0; b < 2; ++b) out[s][b] = outputs(s, b);
  }
};

const Trellis& trellis() {
  static const Trellis t;
  return t;
}

// Mother-code bit j of a step pair is kept by the 2/3 puncturer when
// pattern[j] is set; a pair of input bits yields 4 mother bits.
constexpr std::array<bool, 4> kPuncture23 = {true, true, true, false};

}  // namespace

std::string to_string(CodeRate rate) { return rate == CodeRate::half ? "1/2" : "2/3"; }

CodeRate parse_code_rate(std::string_view text) {
  if (text == "1/2") return CodeRate::half;
  if (text == "2/3") return CodeRate::two_thirds;
  throw InvalidInput("unsupported code rate '" + std::string(text) + "' (use 1/2 or 2/3)");
}

std::string ConvolutionalCodec::name() const { return "conv-k7-133-171-r" + to_string(rate_); }

std::size_t ConvolutionalCodec::encoded_length(std::size_t info_bits) const {
  if (info_bits == 0) throw DimensionError("convolutional code: empty block");
  if (rate_ == CodeRate::half) return 2 * info_bits;
  if (info_bits % 2 != 0) throw DimensionError("rate 2/3 needs an even number of input bits");
  return 3 * info_bits / 2;
}

std::size_t ConvolutionalCodec::decoded_length(std::size_t coded_bits) const {
  if (coded_bits == 0) throw DimensionError("convolutional code: empty block");
  if (rate_ == CodeRate::half) {
    if (coded_bits % 2 != 0) throw DimensionError("rate 1/2 needs an even number of coded bits");
    return coded_bits / 2;
  }
  if (coded_bits % 3 != 0) throw DimensionError("rate 2/3 needs a multiple of 3 coded bits");
  return 2 * coded_bits / 3;
}

Bits ConvolutionalCodec::encode(std::span<const std::uint8_t> bits) const {
  const std::size_t n = bits.size();
  Bits out;
  out.reserve(encoded_length(n));
  // Tail-biting: start in the state the block ends in.
  unsigned state = 0;
  for (std::size_t i = 0; i < kConstraint - 1; ++i) {
    const std::size_t idx = (n * kConstraint - (kConstraint - 1) + i) % n;
    state = next_state(state, bits[idx] & 1u);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned b = bits[i] & 1u;
    const auto c = trellis().out[state][b];
    if (rate_ == CodeRate::half) {
      out.push_back(c[0]);
      out.push_back(c[1]);
    } else {
      const std::size_t base = (i % 2) * 2;
      if (kPuncture23[base]) out.push_back(c[0]);
      if (kPuncture23[base + 1]) out.push_back(c[1]);
    }
    state = next_state(state, b);
  }
  return out;
}

Bits ConvolutionalCodec::decode(std::span<const double> llrs) const {
  const std::size_t n = decoded_length(llrs.size());

  // De-puncture into one LLR pair per trellis step; erased bits get 0.
  std::vector<std::array<double, 2>> step(n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (unsigned j = 0; j < 2; ++j) {
      const bool kept = rate_ == CodeRate::half || kPuncture23[(i % 2) * 2 + j];
      step[i][j] = kept ? llrs[pos++] : 0.0;
    }
  }

  const std::size_t total = n + 2 * kWrap;
  std::vector<std::uint64_t> decisions(total);
  std::array<double, kStates> metric{};
  std::array<double, kStates> next{};
  const auto& tr = trellis();

  for (std::size_t e = 0; e < total; ++e) {
    const std::size_t i = (e + n * ((kWrap / n) + 1) - kWrap) % n;
    const double l0 = step[i][0];
    const double l1 = step[i][1];
    std::uint64_t dec = 0;
    for (unsigned s = 0; s < kStates; ++s) {
      // Predecessors of s: ((s & 31) << 1) | b, input bit s >> 5.
      const unsigned bit = s >> 5;
      const unsigned p0 = (s & 31u) << 1;
      const unsigned p1 = p0 | 1u;
      const auto c0 = tr.out[p0][bit];
      const auto c1 = tr.out[p1][bit];
      const double m0 = metric[p0] + (c0[0] ? -l0 : l0) + (c0[1] ? -l1 : l1);
      const double m1 = metric[p1] + (c1[0] ? -l0 : l0) + (c1[1] ? -l1 : l1);
      if (m1 > m0) {
        next[s] = m1;
        dec |= std::uint64_t{1} << s;
      } else {
        next[s] = m0;
      }
    }
    // Renormalize to keep metrics bounded.
    const double top = next[0];
    for (unsigned s = 0; s < kStates; ++s) metric[s] = next[s] - top;
    decisions[e] = dec;
  }

  unsigned state = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned s = 0; s < kStates; ++s)
    if (metric[s] > best) {
      best = metric[s];
      state = s;
    }

  Bits out(n);
  for (std::size_t e = total; e-- > 0;) {
    if (e >= kWrap && e < kWrap + n) out[e - kWrap] = static_cast<std::uint8_t>(state >> 5);
    const unsigned b = (decisions[e] >> state) & 1u;
    state = ((state & 31u) << 1) | b;
  }
  return out;
}

std::unique_ptr<ChannelCodec> make_codec(CodeRate rate) { return std::make_unique<ConvolutionalCodec>(rate); }

Bits fec_encode(std::span<const std::uint8_t> bits, CodeRate rate) { return ConvolutionalCodec(rate).encode(bits); }

Bits fec_decode(std::span<const double> llrs, CodeRate rate) { return ConvolutionalCodec(rate).decode(llrs); }

}  // namespace gfnoma
