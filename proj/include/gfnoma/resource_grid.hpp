// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "gfnoma/common.hpp"

namespace gfnoma {

struct GridDims {
  std::size_t num_subcarriers = 0;
  std::size_t num_symbols = 0;
  std::size_t num_rx = 1;

  std::size_t per_antenna() const { return num_subcarriers * num_symbols; }
  std::size_t total() const { return per_antenna() * num_rx; }
  bool operator==(const GridDims&) const = default;
};

// Complex value per (rx antenna, OFDM symbol, subcarrier); subcarrier is the
// fastest-varying index.
class ResourceGrid {
 public:
  ResourceGrid() = default;
  explicit ResourceGrid(GridDims dims) : dims_(dims), data_(dims.total()) {}

  const GridDims& dims() const { return dims_; }

  std::size_t index(std::size_t rx, std::size_t symbol, std::size_t subcarrier) const {
    return (rx * dims_.num_symbols + symbol) * dims_.num_subcarriers + subcarrier;
  }
  cdouble& at(std::size_t rx, std::size_t symbol, std::size_t subcarrier) {
    return data_[index(rx, symbol, subcarrier)];
  }
  const cdouble& at(std::size_t rx, std::size_t symbol, std::size_t subcarrier) const {
    return data_[index(rx, symbol, subcarrier)];
  }

  std::span<cdouble> antenna(std::size_t rx) {
    return {data_.data() + rx * dims_.per_antenna(), dims_.per_antenna()};
  }
  std::span<const cdouble> antenna(std::size_t rx) const {
    return {data_.data() + rx * dims_.per_antenna(), dims_.per_antenna()};
  }

  std::span<cdouble> values() { return data_; }
  std::span<const cdouble> values() const { return data_; }

 private:
  GridDims dims_;
  std::vector<cdouble> data_;
};

}  // namespace gfnoma
