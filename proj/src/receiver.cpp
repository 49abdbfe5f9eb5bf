// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/receiver.hpp"

#include <algorithm>
#include <cmath>

#include "gfnoma/crc.hpp"
#include "gfnoma/kernels.hpp"
#include "gfnoma/linalg.hpp"
#include "gfnoma/qam.hpp"

namespace gfnoma {

std::size_t info_bits_for(std::size_t num_symbols, const ChannelCodec& codec) {
  const std::size_t with_crc = codec.decoded_length(2 * num_symbols);
  if (with_crc <= kCrcBits) throw DimensionError("info_bits_for: frame too short for the CRC");
  return with_crc - kCrcBits;
}

UePayload build_payload(Bits info_bits, const ChannelCodec& codec) {
  UePayload p;
  p.info_bits = std::move(info_bits);
  const Bits with_crc = crc_attach(p.info_bits);
  p.crc_bits.assign(with_crc.end() - static_cast<std::ptrdiff_t>(kCrcBits), with_crc.end());
  p.coded_bits = codec.encode(with_crc);
  p.qam_symbols = qam_modulate(p.coded_bits);
  return p;
}

namespace {

constexpr double kDiagonalLoad = 1e-12;
constexpr double kBiasClamp = 1e-12;

// Effective per-block column of every UE, stacked (antenna, element).
ComplexVector effective_column(const ReceiverUe& ue, const DataBlock& block, const Codebook& data_cb,
                               std::size_t num_rx, double scale) {
  const auto s = data_cb.signature(ue.data_signature);
  ComplexVector g(num_rx * block.elements.size());
  for (std::size_t rx = 0; rx < num_rx; ++rx)
    for (std::size_t j = 0; j < block.elements.size(); ++j) {
      const auto& e = block.elements[j];
      g[rx * block.elements.size() + j] = scale * ue.channel->at(rx, e.symbol, e.subcarrier) * s[j];
    }
  return g;
}

}  // namespace

ReceiveResult mmse_pic_receive(const ResourceGrid& grid, const GridLayout& layout, std::span<const ReceiverUe> ues,
                               const Codebook& data_cb, const ChannelCodec& codec, const ReceiverConfig& config) {
  if (data_cb.length() != layout.data_length()) throw DimensionError("mmse_pic_receive: data codebook length mismatch");
  if (!(config.noise_var >= 0.0)) throw InvalidInput("mmse_pic_receive: noise variance must be >= 0");
  for (const auto& ue : ues) {
    if (ue.channel == nullptr || !(ue.channel->dims() == grid.dims()))
      throw DimensionError("mmse_pic_receive: channel estimate does not cover the grid");
    if (ue.data_signature >= data_cb.size()) throw InvalidInput("mmse_pic_receive: data signature out of range");
  }

  const std::size_t num_rx = grid.dims().num_rx;
  const auto& blocks = layout.data_blocks();
  const std::size_t rows = num_rx * layout.data_length();
  const double scale = std::sqrt(static_cast<double>(layout.data_length()) / static_cast<double>(layout.pilot_length()));
  const double load = config.noise_var > 0.0 ? config.noise_var : kDiagonalLoad;
  const std::size_t coded_len = 2 * blocks.size();
  codec.decoded_length(coded_len);

  ReceiveResult result;
  result.residual = grid;
  result.info_bits.resize(ues.size());
  result.decoded_in.assign(ues.size(), 0);

  std::vector<std::size_t> pending(ues.size());
  for (std::size_t i = 0; i < ues.size(); ++i) pending[i] = i;

  for (std::size_t iter = 1; iter <= config.max_iterations && !pending.empty(); ++iter) {
    result.iterations = iter;
    std::vector<std::vector<double>> llrs(pending.size(), std::vector<double>(coded_len));

    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& block = blocks[b];
      std::vector<ComplexVector> cols;
      cols.reserve(pending.size());
      for (const auto u : pending) cols.push_back(effective_column(ues[u], block, data_cb, num_rx, scale));
      const ComplexMatrix g = ComplexMatrix::from_columns(cols);

      ComplexMatrix cov = g * adjoint(g);
      for (std::size_t i = 0; i < rows; ++i) cov(i, i) += load;
      const Cholesky chol(cov);
      const ComplexMatrix w = chol.solve(g);

      ComplexVector y(rows);
      for (std::size_t rx = 0; rx < num_rx; ++rx)
        for (std::size_t j = 0; j < block.elements.size(); ++j) {
          const auto& e = block.elements[j];
          y[rx * block.elements.size() + j] = result.residual.at(rx, e.symbol, e.subcarrier);
        }

      for (std::size_t p = 0; p < pending.size(); ++p) {
        const cdouble estimate = kernels::dot(w.col(p), y);
        const double bias = std::clamp(kernels::dot(w.col(p), g.col(p)).real(), kBiasClamp, 1.0 - kBiasClamp);
        const auto l = qam_soft_demod(estimate, bias, bias * (1.0 - bias));
        llrs[p][2 * b] = l[0];
        llrs[p][2 * b + 1] = l[1];
      }
    }

    std::vector<std::size_t> passed;
    for (std::size_t p = 0; p < pending.size(); ++p) {
      const Bits decoded = codec.decode(llrs[p]);
      if (!crc_check(decoded)) continue;
      const std::size_t u = pending[p];
      passed.push_back(u);
      result.decoded.push_back(u);
      result.decoded_in[u] = iter;
      result.info_bits[u].assign(decoded.begin(), decoded.end() - static_cast<std::ptrdiff_t>(kCrcBits));

      // Rebuild the UE's data-part contribution from the estimate and cancel it.
      const ComplexVector symbols = qam_modulate(codec.encode(decoded));
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const ComplexVector g = effective_column(ues[u], blocks[b], data_cb, num_rx, scale);
        for (std::size_t rx = 0; rx < num_rx; ++rx)
          for (std::size_t j = 0; j < blocks[b].elements.size(); ++j) {
            const auto& e = blocks[b].elements[j];
            result.residual.at(rx, e.symbol, e.subcarrier) -= g[rx * blocks[b].elements.size() + j] * symbols[b];
          }
      }
    }
    if (passed.empty()) break;
    std::erase_if(pending, [&](std::size_t u) { return result.decoded_in[u] != 0; });
  }
  return result;
}

}  // namespace gfnoma
