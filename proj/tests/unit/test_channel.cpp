// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>

#include "gfnoma/channel.hpp"
#include "oracles.hpp"

using namespace gfnoma;

TEST_CASE("Ped-A profile") {
  const auto p = pdp_ped_a();
  CHECK(p.num_taps() == 4);
  double sum = 0.0;
  for (const double w : p.powers) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.rms_delay_spread() * 1e9 == doctest::Approx(45.0).epsilon(3.0 / 45.0));
  CHECK(p.delays_s[3] == doctest::Approx(410e-9));
}

TEST_CASE("TDL-C scaling hits the requested RMS delay spread") {
  for (const double ns : {50.0, 100.0, 300.0, 400.0}) {
    const auto p = pdp_tdl_c(ns * 1e-9);
    CHECK(p.num_taps() == 24);
    CHECK(p.rms_delay_spread() * 1e9 == doctest::Approx(ns).epsilon(0.01));
  }
  const auto flat = pdp_tdl_c(0.0);
  CHECK(flat.num_taps() == 1);
  CHECK(flat.powers[0] == 1.0);
}

TEST_CASE("make_pdp validation and normalization") {
  const auto p = make_pdp({2e-9, 0.0}, {0.0, 0.0});
  CHECK(p.delays_s[0] == 0.0);
  CHECK(p.powers[0] == doctest::Approx(0.5));
  CHECK(p.mean_delay() == doctest::Approx(1e-9));
  CHECK_THROWS_AS(make_pdp({-1e-9}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(make_pdp({1e-9, 1e-9}, {0.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(make_pdp({0.0}, {0.0, 1.0}), InvalidInput);
}

TEST_CASE("static channel is constant in time and reproducible") {
  const GridDims dims{72, 14, 2};
  const auto a = realize_channel(pdp_ped_a(), dims, 0.0, 42);
  for (std::size_t rx = 0; rx < 2; ++rx)
    for (std::size_t n = 1; n < 14; ++n)
      for (std::size_t f = 0; f < 72; ++f) CHECK(a.gains.at(rx, n, f) == a.gains.at(rx, 0, f));
  const auto b = realize_channel(pdp_ped_a(), dims, 0.0, 42);
  for (std::size_t i = 0; i < dims.total(); ++i) CHECK(a.gains.values()[i] == b.gains.values()[i]);
  CHECK(a.gains.at(0, 0, 0) != a.gains.at(1, 0, 0));
}

TEST_CASE("single tap gives a flat channel per antenna") {
  const auto c = realize_channel(pdp_tdl_c(0.0), {24, 7, 1}, 0.0, 5);
  for (std::size_t f = 0; f < 24; ++f) CHECK(c.gains.at(0, 3, f) == c.gains.at(0, 0, 0));
}

TEST_CASE("moving UE produces a time-varying channel") {
  const auto c = realize_channel(pdp_ped_a(), {12, 14, 1}, 30.0, 5);
  CHECK(std::abs(c.gains.at(0, 13, 0) - c.gains.at(0, 0, 0)) > 1e-6);
  CHECK_THROWS_AS(realize_channel(pdp_ped_a(), {12, 14, 1}, -1.0, 5), InvalidInput);
}

TEST_CASE("frequency correlation follows the profile's Fourier transform") {
  const auto pdp = pdp_ped_a();
  const GridDims dims{40, 1, 1};
  const RadioParams radio;
  const std::size_t lag = 30;
  cdouble corr = 0.0;
  double power = 0.0;
  const int n = 4000;
  for (int t = 0; t < n; ++t) {
    const auto c = realize_channel(pdp, dims, 0.0, 1000 + static_cast<std::uint64_t>(t));
    corr += c.gains.at(0, 0, 0) * std::conj(c.gains.at(0, 0, lag));
    power += std::norm(c.gains.at(0, 0, 0));
  }
  corr /= static_cast<double>(n);
  power /= n;
  cdouble expected = 0.0;
  for (std::size_t i = 0; i < pdp.num_taps(); ++i)
    expected += pdp.powers[i] * std::polar(1.0, 2.0 * std::numbers::pi * lag * radio.subcarrier_spacing_hz * pdp.delays_s[i]);
  CHECK(power == doctest::Approx(1.0).epsilon(0.06));
  CHECK(std::abs(corr - expected) < 0.06);
}

TEST_CASE("receive power draw stays inside the spread") {
  const auto p = draw_rx_powers(500, 20.0, 5.0, 2.0, 3);
  double lo = 1e300, hi = 0.0;
  for (const double v : p) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= 2.0 * db_to_linear(15.0) * (1 - 1e-12));
  CHECK(hi <= 2.0 * db_to_linear(25.0) * (1 + 1e-12));
  CHECK(hi / lo > db_to_linear(9.0));
  const auto fixed = draw_rx_powers(3, 10.0, 0.0, 1.0, 3);
  for (const double v : fixed) CHECK(v == doctest::Approx(10.0));
}

TEST_CASE("AWGN has the requested variance") {
  ResourceGrid g({100, 50, 2});
  add_awgn(g, 0.25, 8);
  double s = 0.0;
  cdouble m = 0.0;
  for (const auto v : g.values()) {
    s += std::norm(v);
    m += v;
  }
  const double n = static_cast<double>(g.values().size());
  CHECK(s / n == doctest::Approx(0.25).epsilon(0.03));
  CHECK(std::abs(m / n) < 0.01);
  ResourceGrid quiet({4, 4, 1});
  add_awgn(quiet, 0.0, 1);
  for (const auto v : quiet.values()) CHECK(v == cdouble(0.0));
}
