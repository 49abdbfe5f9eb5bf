// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "gfnoma/codec.hpp"
#include "gfnoma/frame.hpp"

namespace gfnoma {

// Transmit-side bookkeeping for one UE's frame.
struct UePayload {
  Bits info_bits;
  Bits crc_bits;
  Bits coded_bits;
  ComplexVector qam_symbols;
};

// Number of information bits that fill `num_symbols` 4-QAM symbols after the
// CRC and the codec. Throws DimensionError when the sizes do not fit.
std::size_t info_bits_for(std::size_t num_symbols, const ChannelCodec& codec);

UePayload build_payload(Bits info_bits, const ChannelCodec& codec);

// One UE the receiver tries to decode. `channel` is the estimate of
// sqrt(L_p P_k) h_k over the grid (the pilot-scaled channel), as produced by
// the LS estimator.
struct ReceiverUe {
  std::size_t ue = 0;
  std::size_t data_signature = 0;
  const ResourceGrid* channel = nullptr;
};

struct ReceiverConfig {
  double noise_var = 1.0;
  std::size_t max_iterations = 6;
};

struct ReceiveResult {
  std::vector<std::size_t> decoded;      // indices into the `ues` argument, in decoding order
  std::vector<Bits> info_bits;           // per entry of `ues`; empty unless decoded
  std::vector<std::size_t> decoded_in;   // per entry of `ues`; 1-based iteration, 0 = never
  std::size_t iterations = 0;
  ResourceGrid residual;                 // received grid after cancellation
};

// Joint per-data-block MMSE with CRC-gated parallel interference cancellation.
// For data block b the effective column of UE k stacks
//   sqrt(L / L_p) * channel_k(e) * s_k[j]
// over the block's elements and all antennas; W = (G G^H + s2 I)^{-1} G.
// UEs passing the CRC are re-encoded, re-spread and subtracted, then the
// remaining UEs are detected again, until max_iterations or no new CRC pass.
// A zero noise variance is replaced by a 1e-12 diagonal load.
ReceiveResult mmse_pic_receive(const ResourceGrid& grid, const GridLayout& layout, std::span<const ReceiverUe> ues,
                               const Codebook& data_cb, const ChannelCodec& codec, const ReceiverConfig& config);

}  // namespace gfnoma
