// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "gfnoma/frame.hpp"
#include "gfnoma/linalg.hpp"
#include "gfnoma/signatures.hpp"

namespace gfnoma {

// Per-UE channel estimates. anchors[u] holds one gain per (antenna, pilot
// block), antenna-major; grids[u] is the interpolation over the whole grid.
// Estimates include the pilot amplitude sqrt(L_p P_k).
struct ChannelEstimate {
  std::vector<ComplexVector> anchors;
  std::vector<ResourceGrid> grids;
};

// LS estimate per pilot block with the masking sign removed:
//   h_i = ((A^H A)^{-1} A^H y_i) ./ m_i
// `blocks` is ordered (antenna, block) as produced by extract_pilot_blocks.
// Throws RankDeficient when the selected signatures are linearly dependent.
std::vector<ComplexVector> ls_estimate(std::span<const ComplexVector> blocks, const GridLayout& layout,
                                       const Codebook& pilot_cb, const MaskingTable* masks,
                                       std::span<const std::size_t> active);

// Bilinear inter/extrapolation between pilot-block anchors (block centroids).
// The anchors must form a rectangular set of frequency x time coordinates;
// with a single coordinate along an axis the estimate is constant along it.
class ChannelInterpolator {
 public:
  explicit ChannelInterpolator(const GridLayout& layout);

  std::size_t num_frequency_anchors() const { return freq_.size(); }
  std::size_t num_time_anchors() const { return time_.size(); }

  // `anchors` holds one value per pilot block for a single antenna.
  cdouble at(std::span<const cdouble> anchors, double subcarrier, double symbol) const;

  // `anchors` holds one value per (antenna, block), antenna-major.
  ResourceGrid interpolate(std::span<const cdouble> anchors, std::size_t num_rx) const;

 private:
  std::size_t block_at(std::size_t fi, std::size_t ti) const { return index_[ti * freq_.size() + fi]; }

  std::vector<double> freq_;
  std::vector<double> time_;
  std::vector<std::size_t> index_;
  std::size_t num_blocks_;
  std::size_t num_subcarriers_;
  std::size_t num_symbols_;
};

ChannelEstimate estimate_channels(std::span<const ComplexVector> blocks, const GridLayout& layout,
                                  std::size_t num_rx, const Codebook& pilot_cb, const MaskingTable* masks,
                                  std::span<const std::size_t> active);

}  // namespace gfnoma
