// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/chanest.hpp"

#include <algorithm>
#include <cmath>

namespace gfnoma {

std::vector<ComplexVector> ls_estimate(std::span<const ComplexVector> blocks, const GridLayout& layout,
                                       const Codebook& pilot_cb, const MaskingTable* masks,
                                       std::span<const std::size_t> active) {
  const std::size_t nb = layout.pilot_blocks().size();
  if (nb == 0 || blocks.size() % nb != 0) throw DimensionError("ls_estimate: block count is not a multiple of the layout");
  if (active.empty()) return {};
  if (masks != nullptr && masks->num_blocks() < nb) throw DimensionError("ls_estimate: masking table too short");

  const LeastSquares ls(select_columns(pilot_cb.matrix(), active));
  std::vector<ComplexVector> anchors(active.size(), ComplexVector(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto h = ls.solve(blocks[i]);
    const std::size_t b = i % nb;
    for (std::size_t u = 0; u < active.size(); ++u)
      anchors[u][i] = masks != nullptr ? h[u] / masks->at(active[u], b) : h[u];
  }
  return anchors;
}

namespace {

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Segment index and fractional position for linear inter/extrapolation.
std::pair<std::size_t, double> locate(const std::vector<double>& coords, double x) {
  if (coords.size() == 1) return {0, 0.0};
  std::size_t i = 0;
  while (i + 2 < coords.size() && x > coords[i + 1]) ++i;
  return {i, (x - coords[i]) / (coords[i + 1] - coords[i])};
}

}  // namespace

ChannelInterpolator::ChannelInterpolator(const GridLayout& layout)
    : num_blocks_(layout.pilot_blocks().size()),
      num_subcarriers_(layout.num_subcarriers()),
      num_symbols_(layout.num_symbols()) {
  std::vector<double> f, t;
  for (const auto& b : layout.pilot_blocks()) {
    f.push_back(b.anchor_subcarrier);
    t.push_back(b.anchor_symbol);
  }
  freq_ = unique_sorted(f);
  time_ = unique_sorted(t);
  if (freq_.size() * time_.size() != num_blocks_)
    throw InvalidInput("ChannelInterpolator: pilot anchors do not form a rectangular set");
  index_.assign(num_blocks_, num_blocks_);
  for (std::size_t b = 0; b < num_blocks_; ++b) {
    const auto fi = static_cast<std::size_t>(std::lower_bound(freq_.begin(), freq_.end(), f[b]) - freq_.begin());
    const auto ti = static_cast<std::size_t>(std::lower_bound(time_.begin(), time_.end(), t[b]) - time_.begin());
    auto& slot = index_[ti * freq_.size() + fi];
    if (slot != num_blocks_) throw InvalidInput("ChannelInterpolator: two pilot blocks share an anchor");
    slot = b;
  }
}

cdouble ChannelInterpolator::at(std::span<const cdouble> anchors, double subcarrier, double symbol) const {
  if (anchors.size() != num_blocks_) throw DimensionError("ChannelInterpolator: one anchor per block required");
  const auto [fi, fw] = locate(freq_, subcarrier);
  const auto [ti, tw] = locate(time_, symbol);
  const auto along_freq = [&](std::size_t row) {
    const cdouble lo = anchors[block_at(fi, row)];
    if (freq_.size() == 1) return lo;
    const cdouble hi = anchors[block_at(fi + 1, row)];
    return (1.0 - fw) * lo + fw * hi;
  };
  const cdouble lo = along_freq(ti);
  if (time_.size() == 1) return lo;
  const cdouble hi = along_freq(ti + 1);
  return (1.0 - tw) * lo + tw * hi;
}

ResourceGrid ChannelInterpolator::interpolate(std::span<const cdouble> anchors, std::size_t num_rx) const {
  if (anchors.size() != num_blocks_ * num_rx) throw DimensionError("ChannelInterpolator: anchor count mismatch");
  ResourceGrid grid(GridDims{num_subcarriers_, num_symbols_, num_rx});
  for (std::size_t rx = 0; rx < num_rx; ++rx) {
    const auto a = anchors.subspan(rx * num_blocks_, num_blocks_);
    for (std::size_t sym = 0; sym < num_symbols_; ++sym)
      for (std::size_t sc = 0; sc < num_subcarriers_; ++sc)
        grid.at(rx, sym, sc) = at(a, static_cast<double>(sc), static_cast<double>(sym));
  }
  return grid;
}

ChannelEstimate estimate_channels(std::span<const ComplexVector> blocks, const GridLayout& layout,
                                  std::size_t num_rx, const Codebook& pilot_cb, const MaskingTable* masks,
                                  std::span<const std::size_t> active) {
  if (blocks.size() != num_rx * layout.pilot_blocks().size())
    throw DimensionError("estimate_channels: block count does not match antennas x pilot blocks");
  ChannelEstimate est;
  est.anchors = ls_estimate(blocks, layout, pilot_cb, masks, active);
  const ChannelInterpolator interp(layout);
  est.grids.reserve(active.size());
  for (const auto& a : est.anchors) est.grids.push_back(interp.interpolate(a, num_rx));
  return est;
}

}  // namespace gfnoma
