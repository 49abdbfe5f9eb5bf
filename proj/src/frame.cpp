// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/frame.hpp"

#include <algorithm>
#include <cmath>

namespace gfnoma {

GridLayout::GridLayout(PilotStrategy strategy, std::size_t num_subcarriers, std::size_t num_symbols,
                       std::size_t data_length, std::size_t pilot_length, std::vector<PilotBlock> pilot_blocks,
                       std::vector<DataBlock> data_blocks)
    : strategy_(strategy),
      num_subcarriers_(num_subcarriers),
      num_symbols_(num_symbols),
      data_length_(data_length),
      pilot_length_(pilot_length),
      pilot_blocks_(std::move(pilot_blocks)),
      data_blocks_(std::move(data_blocks)) {}

namespace {

PilotBlock make_pilot_block(std::vector<GridElement> elements) {
  std::sort(elements.begin(), elements.end(), [](const GridElement& a, const GridElement& b) {
    return a.subcarrier != b.subcarrier ? a.subcarrier < b.subcarrier : a.symbol < b.symbol;
  });
  double f = 0.0, t = 0.0;
  for (const auto& e : elements) {
    f += static_cast<double>(e.subcarrier);
    t += static_cast<double>(e.symbol);
  }
  const double n = static_cast<double>(elements.size());
  return PilotBlock{std::move(elements), f / n, t / n};
}

void check_grid(const ResourceGrid& grid, const GridLayout& layout) {
  if (grid.dims().num_subcarriers != layout.num_subcarriers() || grid.dims().num_symbols != layout.num_symbols())
    throw DimensionError("resource grid does not match the layout");
}

void check_channels(const ResourceGrid& grid, std::span<const std::size_t> signatures,
                    std::span<const ChannelRealization> channels, const Codebook& cb, std::size_t length) {
  if (signatures.size() != channels.size()) throw DimensionError("one channel per UE required");
  if (cb.length() != length) throw DimensionError("codebook length does not match the block length");
  for (std::size_t u = 0; u < signatures.size(); ++u) {
    if (signatures[u] >= cb.size())
      throw InvalidInput("signature index " + std::to_string(signatures[u]) + " outside the codebook");
    if (!(channels[u].gains.dims() == grid.dims())) throw DimensionError("channel grid does not match the resource grid");
  }
}

}  // namespace

GridLayout build_layout(PilotStrategy strategy, std::size_t num_rb_freq, std::size_t num_slots,
                        std::size_t data_length, std::size_t pilot_length) {
  if (num_rb_freq == 0 || num_slots == 0 || data_length == 0 || pilot_length == 0)
    throw InvalidInput("build_layout: all dimensions must be >= 1");
  const std::size_t nsc = kSubcarriersPerRb * num_rb_freq;
  const std::size_t nsym = kSymbolsPerSlot * num_slots;
  if (nsc % data_length != 0) throw InvalidInput("build_layout: data length must divide the subcarrier count");

  std::vector<PilotBlock> pilots;
  if (strategy == PilotStrategy::contiguous) {
    if (nsc % pilot_length != 0) throw InvalidInput("build_layout: pilot length must divide the subcarrier count");
    for (std::size_t first = 0; first < nsc; first += pilot_length)
      for (std::size_t slot = 0; slot < num_slots; ++slot) {
        std::vector<GridElement> elements;
        for (std::size_t f = first; f < first + pilot_length; ++f)
          elements.push_back({f, slot * kSymbolsPerSlot + kPilotSymbolInSlot});
        pilots.push_back(make_pilot_block(std::move(elements)));
      }
  } else {
    if (pilot_length % 2 != 0) throw InvalidInput("build_layout: split pilots need an even length");
    if (num_slots % 2 != 0) throw InvalidInput("build_layout: split pilots need an even number of slots");
    const std::size_t half = pilot_length / 2;
    if (nsc % half != 0) throw InvalidInput("build_layout: half pilot length must divide the subcarrier count");
    for (std::size_t first = 0; first < nsc; first += half)
      for (std::size_t pair = 0; pair < num_slots / 2; ++pair) {
        std::vector<GridElement> elements;
        for (std::size_t f = first; f < first + half; ++f)
          for (std::size_t s = 0; s < 2; ++s)
            elements.push_back({f, (2 * pair + s) * kSymbolsPerSlot + kPilotSymbolInSlot});
        pilots.push_back(make_pilot_block(std::move(elements)));
      }
  }

  std::vector<DataBlock> data;
  for (std::size_t sym = 0; sym < nsym; ++sym) {
    if (sym % kSymbolsPerSlot == kPilotSymbolInSlot) continue;
    for (std::size_t first = 0; first < nsc; first += data_length) {
      DataBlock block;
      for (std::size_t f = first; f < first + data_length; ++f) block.elements.push_back({f, sym});
      data.push_back(std::move(block));
    }
  }
  return GridLayout(strategy, nsc, nsym, data_length, pilot_length, std::move(pilots), std::move(data));
}

void map_pilots(ResourceGrid& grid, const GridLayout& layout, const Codebook& pilot_cb, const MaskingTable* masks,
                std::span<const std::size_t> signatures, std::span<const ChannelRealization> channels) {
  check_grid(grid, layout);
  check_channels(grid, signatures, channels, pilot_cb, layout.pilot_length());
  const auto& blocks = layout.pilot_blocks();
  if (masks != nullptr && masks->num_blocks() < blocks.size())
    throw DimensionError("masking table has fewer coefficients than pilot blocks");
  const double lp = static_cast<double>(layout.pilot_length());

  for (std::size_t u = 0; u < signatures.size(); ++u) {
    const std::size_t k = signatures[u];
    if (masks != nullptr && k >= masks->num_users()) throw InvalidInput("no masking row for signature");
    const auto a = pilot_cb.signature(k);
    const double amp = std::sqrt(lp * channels[u].rx_power);
    const auto& h = channels[u].gains;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const double scale = amp * (masks != nullptr ? masks->at(k, b) : 1.0);
      for (std::size_t rx = 0; rx < grid.dims().num_rx; ++rx)
        for (std::size_t j = 0; j < blocks[b].elements.size(); ++j) {
          const auto& e = blocks[b].elements[j];
          grid.at(rx, e.symbol, e.subcarrier) += scale * a[j] * h.at(rx, e.symbol, e.subcarrier);
        }
    }
  }
}

std::vector<ComplexVector> extract_pilot_blocks(const ResourceGrid& grid, const GridLayout& layout) {
  check_grid(grid, layout);
  std::vector<ComplexVector> out;
  out.reserve(grid.dims().num_rx * layout.pilot_blocks().size());
  for (std::size_t rx = 0; rx < grid.dims().num_rx; ++rx)
    for (const auto& block : layout.pilot_blocks()) {
      ComplexVector y(block.elements.size());
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = grid.at(rx, block.elements[j].symbol, block.elements[j].subcarrier);
      out.push_back(std::move(y));
    }
  return out;
}

void map_data(ResourceGrid& grid, const GridLayout& layout, const Codebook& data_cb,
              std::span<const std::size_t> signatures, std::span<const ChannelRealization> channels,
              std::span<const ComplexVector> symbols) {
  check_grid(grid, layout);
  check_channels(grid, signatures, channels, data_cb, layout.data_length());
  if (symbols.size() != signatures.size()) throw DimensionError("map_data: one symbol stream per UE required");
  const auto& blocks = layout.data_blocks();
  const double l = static_cast<double>(layout.data_length());

  for (std::size_t u = 0; u < signatures.size(); ++u) {
    if (symbols[u].size() != blocks.size())
      throw DimensionError("map_data: UE symbol count " + std::to_string(symbols[u].size()) + " != data block count " +
                           std::to_string(blocks.size()));
    const auto s = data_cb.signature(signatures[u]);
    const double amp = std::sqrt(l * channels[u].rx_power);
    const auto& h = channels[u].gains;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const cdouble x = amp * symbols[u][b];
      for (std::size_t rx = 0; rx < grid.dims().num_rx; ++rx)
        for (std::size_t j = 0; j < blocks[b].elements.size(); ++j) {
          const auto& e = blocks[b].elements[j];
          grid.at(rx, e.symbol, e.subcarrier) += x * s[j] * h.at(rx, e.symbol, e.subcarrier);
        }
    }
  }
}

std::vector<ComplexVector> extract_data_blocks(const ResourceGrid& grid, const GridLayout& layout) {
  check_grid(grid, layout);
  std::vector<ComplexVector> out;
  out.reserve(grid.dims().num_rx * layout.data_blocks().size());
  for (std::size_t rx = 0; rx < grid.dims().num_rx; ++rx)
    for (const auto& block : layout.data_blocks()) {
      ComplexVector y(block.elements.size());
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = grid.at(rx, block.elements[j].symbol, block.elements[j].subcarrier);
      out.push_back(std::move(y));
    }
  return out;
}

}  // namespace gfnoma
