// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace gfnoma {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr std::size_t kDopplerSinusoids = 16;

struct Tap {
  double delay;
  double power_db;
};

// TR 38.901 Table 7.7.2-3 (TDL-C), normalized delays.
constexpr Tap kTdlC[] = {
    {0.0, -4.4},     {0.2099, -1.2},  {0.2219, -3.5},  {0.2329, -5.2},  {0.2176, -2.5},  {0.6366, 0.0},
    {0.6448, -2.2},  {0.6560, -3.9},  {0.6584, -7.4},  {0.7935, -7.1},  {0.8213, -10.7}, {0.9336, -11.1},
    {1.2285, -5.1},  {1.3083, -6.8},  {2.1704, -8.7},  {2.7105, -13.2}, {4.2589, -13.9}, {4.6003, -13.9},
    {5.4902, -15.8}, {5.6077, -17.1}, {6.3065, -16.0}, {6.6374, -15.7}, {7.0427, -21.6}, {8.6523, -22.8},
};

}  // namespace

double PowerDelayProfile::mean_delay() const {
  return std::inner_product(powers.begin(), powers.end(), delays_s.begin(), 0.0);
}

double PowerDelayProfile::rms_delay_spread() const {
  double second = 0.0;
  for (std::size_t i = 0; i < num_taps(); ++i) second += powers[i] * delays_s[i] * delays_s[i];
  const double mean = mean_delay();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

PowerDelayProfile make_pdp(std::vector<double> delays_s, const std::vector<double>& powers_db) {
  if (delays_s.empty() || delays_s.size() != powers_db.size())
    throw InvalidInput("make_pdp: need matching, non-empty delay and power lists");
  std::vector<std::size_t> order(delays_s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return delays_s[a] < delays_s[b]; });

  PowerDelayProfile pdp;
  double total = 0.0;
  for (const auto i : order) {
    if (delays_s[i] < 0.0) throw InvalidInput("make_pdp: negative delay");
    if (!pdp.delays_s.empty() && delays_s[i] <= pdp.delays_s.back())
      throw InvalidInput("make_pdp: delays must be distinct");
    pdp.delays_s.push_back(delays_s[i]);
    pdp.powers.push_back(db_to_linear(powers_db[i]));
    total += pdp.powers.back();
  }
  for (auto& p : pdp.powers) p /= total;
  return pdp;
}

PowerDelayProfile pdp_ped_a() {
  return make_pdp({0.0, 110e-9, 190e-9, 410e-9}, {0.0, -9.7, -19.2, -22.8});
}

PowerDelayProfile pdp_tdl_c(double rms_ds_s) {
  if (!(rms_ds_s >= 0.0)) throw InvalidInput("pdp_tdl_c: delay spread must be >= 0");
  if (rms_ds_s == 0.0) return PowerDelayProfile{{0.0}, {1.0}};
  std::vector<double> delays;
  std::vector<double> powers_db;
  for (const auto& tap : kTdlC) {
    delays.push_back(tap.delay * rms_ds_s);
    powers_db.push_back(tap.power_db);
  }
  return make_pdp(std::move(delays), powers_db);
}

ChannelRealization realize_channel(const PowerDelayProfile& pdp, const GridDims& dims, double velocity_mps,
                                   std::uint64_t seed, const RadioParams& radio) {
  if (pdp.num_taps() == 0 || pdp.powers.size() != pdp.num_taps())
    throw InvalidInput("realize_channel: malformed power delay profile");
  if (velocity_mps < 0.0) throw InvalidInput("realize_channel: velocity must be >= 0");

  const std::size_t taps = pdp.num_taps();
  const std::size_t nsc = dims.num_subcarriers;
  const std::size_t nsym = dims.num_symbols;

  // Per-subcarrier phase ramp of every tap.
  std::vector<cdouble> ramp(taps * nsc);
  for (std::size_t t = 0; t < taps; ++t)
    for (std::size_t f = 0; f < nsc; ++f) {
      const double phi = -2.0 * std::numbers::pi * static_cast<double>(f) * radio.subcarrier_spacing_hz * pdp.delays_s[t];
      ramp[t * nsc + f] = std::polar(1.0, phi);
    }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  const double doppler_hz = velocity_mps * radio.carrier_hz / kSpeedOfLight;
  const bool static_channel = doppler_hz == 0.0;

  ChannelRealization out{ResourceGrid(dims), 1.0};
  std::vector<cdouble> tap_gain(taps);
  std::vector<cdouble> weights(taps * kDopplerSinusoids);
  std::vector<double> doppler(taps * kDopplerSinusoids);

  for (std::size_t rx = 0; rx < dims.num_rx; ++rx) {
    if (static_channel) {
      for (std::size_t t = 0; t < taps; ++t)
        tap_gain[t] = std::sqrt(pdp.powers[t]) * cdouble(normal(rng), normal(rng));
    } else {
      const double w = 1.0 / std::sqrt(static_cast<double>(kDopplerSinusoids));
      for (std::size_t t = 0; t < taps; ++t)
        for (std::size_t m = 0; m < kDopplerSinusoids; ++m) {
          weights[t * kDopplerSinusoids + m] = w * std::sqrt(pdp.powers[t]) * cdouble(normal(rng), normal(rng));
          doppler[t * kDopplerSinusoids + m] = doppler_hz * std::cos(angle(rng));
        }
    }
    for (std::size_t n = 0; n < nsym; ++n) {
      if (!static_channel) {
        const double time = static_cast<double>(n) * radio.symbol_duration_s;
        for (std::size_t t = 0; t < taps; ++t) {
          cdouble g = 0.0;
          for (std::size_t m = 0; m < kDopplerSinusoids; ++m) {
            const std::size_t i = t * kDopplerSinusoids + m;
            g += weights[i] * std::polar(1.0, 2.0 * std::numbers::pi * doppler[i] * time);
          }
          tap_gain[t] = g;
        }
      } else if (n > 0) {
        const auto first = out.gains.antenna(rx).subspan(0, nsc);
        std::copy(first.begin(), first.end(), out.gains.antenna(rx).begin() + n * nsc);
        continue;
      }
      for (std::size_t f = 0; f < nsc; ++f) {
        cdouble h = 0.0;
        for (std::size_t t = 0; t < taps; ++t) h += tap_gain[t] * ramp[t * nsc + f];
        out.gains.at(rx, n, f) = h;
      }
    }
  }
  return out;
}

std::vector<double> draw_rx_powers(std::size_t num_ues, double mean_snr_db, double spread_db, double noise_var,
                                   std::uint64_t seed) {
  if (!(spread_db >= 0.0)) throw InvalidInput("draw_rx_powers: spread must be >= 0");
  if (!(noise_var >= 0.0)) throw InvalidInput("draw_rx_powers: noise variance must be >= 0");
  std::vector<double> powers(num_ues);
  if (spread_db == 0.0) {
    std::fill(powers.begin(), powers.end(), noise_var * db_to_linear(mean_snr_db));
    return powers;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> snr(mean_snr_db - spread_db, mean_snr_db + spread_db);
  for (auto& p : powers) p = noise_var * db_to_linear(snr(rng));
  return powers;
}

void add_awgn(ResourceGrid& grid, double noise_var, std::uint64_t seed) {
  if (!(noise_var >= 0.0)) throw InvalidInput("add_awgn: noise variance must be >= 0");
  if (noise_var == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(noise_var / 2.0));
  for (auto& v : grid.values()) v += cdouble(normal(rng), normal(rng));
}

}  // namespace gfnoma
