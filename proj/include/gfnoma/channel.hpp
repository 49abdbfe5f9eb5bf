// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gfnoma/resource_grid.hpp"

namespace gfnoma {

// Tapped delay line with linear tap powers summing to one.
struct PowerDelayProfile {
  std::vector<double> delays_s;
  std::vector<double> powers;

  std::size_t num_taps() const { return delays_s.size(); }
  double mean_delay() const;
  // sqrt(sum p tau^2 - (sum p tau)^2)
  double rms_delay_spread() const;
};

// Builds a profile from tap delays and powers in dB: taps are sorted by delay
// and powers are renormalized to unit sum. Throws InvalidInput on negative or
// repeated delays.
PowerDelayProfile make_pdp(std::vector<double> delays_s, const std::vector<double>& powers_db);

// ITU Pedestrian-A: delays 0/110/190/410 ns, powers 0/-9.7/-19.2/-22.8 dB.
PowerDelayProfile pdp_ped_a();

// 3GPP TDL-C normalized profile with every delay scaled by rms_ds_s. A zero
// delay spread collapses to a single unit tap.
PowerDelayProfile pdp_tdl_c(double rms_ds_s);

struct RadioParams {
  double subcarrier_spacing_hz = 15e3;
  double carrier_hz = 2e9;
  double symbol_duration_s = 0.5e-3 / 7.0;
};

// One UE's frequency-domain channel over the grid (all rx antennas) and its
// per-resource-element average receive power.
struct ChannelRealization {
  ResourceGrid gains;
  double rx_power = 1.0;
};

// Each tap is a circularly-symmetric complex Gaussian with variance equal to
// the tap power, independent per rx antenna. Time variation uses a sum of 16
// Gaussian-weighted Doppler sinusoids (Jakes spectrum in expectation), held
// constant over each OFDM symbol; velocity 0 gives a time-invariant channel.
ChannelRealization realize_channel(const PowerDelayProfile& pdp, const GridDims& dims, double velocity_mps,
                                   std::uint64_t seed, const RadioParams& radio = {});

// Per-UE linear receive power: SNR drawn uniformly in
// [mean_snr_db - spread_db, mean_snr_db + spread_db] times noise_var.
std::vector<double> draw_rx_powers(std::size_t num_ues, double mean_snr_db, double spread_db, double noise_var,
                                   std::uint64_t seed);

// Adds CN(0, noise_var) to every resource element.
void add_awgn(ResourceGrid& grid, double noise_var, std::uint64_t seed);

}  // namespace gfnoma
