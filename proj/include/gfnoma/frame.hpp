// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "gfnoma/channel.hpp"
#include "gfnoma/resource_grid.hpp"
#include "gfnoma/signatures.hpp"

namespace gfnoma {

inline constexpr std::size_t kSubcarriersPerRb = 12;
inline constexpr std::size_t kSymbolsPerSlot = 7;
// Pilot symbol inside every slot (0-based): symbols 3 and 10 of a 14-symbol frame.
inline constexpr std::size_t kPilotSymbolInSlot = 3;

enum class PilotStrategy {
  contiguous,  // L_p consecutive subcarriers in one pilot symbol
  split,       // L_p/2 consecutive subcarriers in each of two slots' pilot symbols
};

struct GridElement {
  std::size_t subcarrier;
  std::size_t symbol;
  bool operator==(const GridElement&) const = default;
};

// Elements are ordered by ascending subcarrier, then ascending symbol; that
// order is the signature index order.
struct PilotBlock {
  std::vector<GridElement> elements;
  double anchor_subcarrier;  // mean of the element coordinates
  double anchor_symbol;
};

struct DataBlock {
  std::vector<GridElement> elements;  // L consecutive subcarriers of one symbol
};

class GridLayout {
 public:
  GridLayout(PilotStrategy strategy, std::size_t num_subcarriers, std::size_t num_symbols, std::size_t data_length,
             std::size_t pilot_length, std::vector<PilotBlock> pilot_blocks, std::vector<DataBlock> data_blocks);

  PilotStrategy strategy() const { return strategy_; }
  std::size_t num_subcarriers() const { return num_subcarriers_; }
  std::size_t num_symbols() const { return num_symbols_; }
  std::size_t data_length() const { return data_length_; }
  std::size_t pilot_length() const { return pilot_length_; }
  const std::vector<PilotBlock>& pilot_blocks() const { return pilot_blocks_; }
  const std::vector<DataBlock>& data_blocks() const { return data_blocks_; }

  GridDims dims(std::size_t num_rx) const { return {num_subcarriers_, num_symbols_, num_rx}; }

 private:
  PilotStrategy strategy_;
  std::size_t num_subcarriers_;
  std::size_t num_symbols_;
  std::size_t data_length_;
  std::size_t pilot_length_;
  std::vector<PilotBlock> pilot_blocks_;
  std::vector<DataBlock> data_blocks_;
};

// Grid of (12 * num_rb_freq) subcarriers x (7 * num_slots) symbols. Pilot
// blocks are ordered frequency-major, then time. Throws InvalidInput when the
// block lengths do not tile the pilot symbols or data symbols.
GridLayout build_layout(PilotStrategy strategy, std::size_t num_rb_freq, std::size_t num_slots,
                        std::size_t data_length, std::size_t pilot_length);

// Adds sqrt(L_p * P_k) * a_k[j] * h_k(e) * m_{k,b} to pilot element j of block b
// for every listed UE. `masks` may be null (no masking). `signatures[u]` is the
// pilot signature index (and masking row) of UE u, `channels[u]` its channel.
void map_pilots(ResourceGrid& grid, const GridLayout& layout, const Codebook& pilot_cb, const MaskingTable* masks,
                std::span<const std::size_t> signatures, std::span<const ChannelRealization> channels);

// One L_p vector per (antenna, block), antenna-major.
std::vector<ComplexVector> extract_pilot_blocks(const ResourceGrid& grid, const GridLayout& layout);

// Adds sqrt(L * P_k) * s_k[j] * h_k(e) * x_{k,b} to data element j of block b.
// `symbols[u]` must hold one symbol per data block.
void map_data(ResourceGrid& grid, const GridLayout& layout, const Codebook& data_cb,
              std::span<const std::size_t> signatures, std::span<const ChannelRealization> channels,
              std::span<const ComplexVector> symbols);

// One L vector per (antenna, block), antenna-major.
std::vector<ComplexVector> extract_data_blocks(const ResourceGrid& grid, const GridLayout& layout);

}  // namespace gfnoma
