// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "gfnoma/frame.hpp"
#include "oracles.hpp"

using namespace gfnoma;

namespace {

ChannelRealization flat_channel(GridDims dims, cdouble h, double power) {
  ChannelRealization c{ResourceGrid(dims), power};
  for (auto& v : c.gains.values()) v = h;
  return c;
}

}  // namespace

TEST_CASE("twelve-RB grid layouts") {
  for (const auto strategy : {PilotStrategy::contiguous, PilotStrategy::split}) {
    const auto layout = build_layout(strategy, 6, 2, 4, 12);
    CHECK(layout.num_subcarriers() == 72);
    CHECK(layout.num_symbols() == 14);
    CHECK(layout.pilot_blocks().size() == 12);
    CHECK(layout.data_blocks().size() == 216);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& b : layout.pilot_blocks()) {
      CHECK(b.elements.size() == 12);
      for (const auto& e : b.elements) {
        CHECK((e.symbol == 3 || e.symbol == 10));
        seen.insert({e.subcarrier, e.symbol});
      }
    }
    for (const auto& b : layout.data_blocks()) {
      CHECK(b.elements.size() == 4);
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(b.elements[j].symbol == b.elements[0].symbol);
        CHECK(b.elements[j].subcarrier == b.elements[0].subcarrier + j);
        CHECK((b.elements[j].symbol != 3 && b.elements[j].symbol != 10));
      }
      for (const auto& e : b.elements) seen.insert({e.subcarrier, e.symbol});
    }
    CHECK(seen.size() == 72 * 14);
  }
}

TEST_CASE("contiguous and split block shapes") {
  const auto c = build_layout(PilotStrategy::contiguous, 6, 2, 4, 12);
  const auto& b0 = c.pilot_blocks()[0];
  for (std::size_t j = 0; j < 12; ++j) CHECK(b0.elements[j] == GridElement{j, 3});
  CHECK(c.pilot_blocks()[1].elements[0] == GridElement{0, 10});
  CHECK(b0.anchor_subcarrier == doctest::Approx(5.5));
  CHECK(b0.anchor_symbol == doctest::Approx(3.0));

  const auto s = build_layout(PilotStrategy::split, 6, 2, 4, 12);
  const auto& s0 = s.pilot_blocks()[0];
  for (std::size_t j = 0; j < 12; ++j) CHECK(s0.elements[j] == GridElement{j / 2, j % 2 == 0 ? 3u : 10u});
  CHECK(s0.anchor_subcarrier == doctest::Approx(2.5));
  CHECK(s0.anchor_symbol == doctest::Approx(6.5));
  CHECK(s.pilot_blocks()[1].elements[0].subcarrier == 6);
}

TEST_CASE("single RB carries two pilot blocks") {
  const auto l = build_layout(PilotStrategy::contiguous, 1, 2, 4, 12);
  CHECK(l.pilot_blocks().size() == 2);
  CHECK(l.num_subcarriers() == 12);
  CHECK(l.num_symbols() == 14);
}

TEST_CASE("layout validation") {
  CHECK_THROWS_AS(build_layout(PilotStrategy::contiguous, 6, 2, 5, 12), InvalidInput);
  CHECK_THROWS_AS(build_layout(PilotStrategy::contiguous, 6, 2, 4, 7), InvalidInput);
  CHECK_THROWS_AS(build_layout(PilotStrategy::split, 6, 1, 4, 12), InvalidInput);
  CHECK_THROWS_AS(build_layout(PilotStrategy::split, 6, 2, 4, 5), InvalidInput);
  CHECK_THROWS_AS(build_layout(PilotStrategy::contiguous, 0, 2, 4, 12), InvalidInput);
}

TEST_CASE("pilot mapping and extraction") {
  const auto layout = build_layout(PilotStrategy::contiguous, 6, 2, 4, 12);
  const auto cb = generate_grassmannian(12, 32, 1, 20);
  const auto masks = generate_masking(32, 12, 2);
  const GridDims dims = layout.dims(2);
  const std::vector<std::size_t> sigs{5};
  const std::vector<ChannelRealization> ch{flat_channel(dims, {0.5, -0.25}, 4.0)};
  ResourceGrid grid(dims);
  map_pilots(grid, layout, cb, &masks, sigs, ch);
  const auto blocks = extract_pilot_blocks(grid, layout);
  CHECK(blocks.size() == 24);
  const double amp = std::sqrt(12.0 * 4.0);
  for (std::size_t i = 0; i < 24; ++i) {
    const std::size_t b = i % 12;
    for (std::size_t j = 0; j < 12; ++j) {
      const cdouble expected = amp * cb.signature(5)[j] * cdouble(0.5, -0.25) * masks.at(5, b);
      CHECK(std::abs(blocks[i][j] - expected) < 1e-12);
    }
  }
  const auto data = extract_data_blocks(grid, layout);
  CHECK(data.size() == 2 * 216);
  for (const auto& d : data)
    for (const auto v : d) CHECK(v == cdouble(0.0));
}

TEST_CASE("data mapping") {
  const auto layout = build_layout(PilotStrategy::contiguous, 1, 2, 4, 12);
  const auto cb = generate_grassmannian(4, 16, 1, 20);
  const GridDims dims = layout.dims(1);
  const std::vector<std::size_t> sigs{3};
  const std::vector<ChannelRealization> ch{flat_channel(dims, 1.0, 2.0)};
  ComplexVector symbols(layout.data_blocks().size());
  for (std::size_t b = 0; b < symbols.size(); ++b) symbols[b] = std::polar(1.0, 0.1 * static_cast<double>(b));
  ResourceGrid grid(dims);
  map_data(grid, layout, cb, sigs, ch, std::vector<ComplexVector>{symbols});
  const auto blocks = extract_data_blocks(grid, layout);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(blocks[b][j] - std::sqrt(8.0) * cb.signature(3)[j] * symbols[b]) < 1e-12);
  CHECK_THROWS_AS(map_data(grid, layout, cb, sigs, ch, std::vector<ComplexVector>{ComplexVector(3)}),
                  DimensionError);
  CHECK_THROWS_AS(map_data(grid, layout, cb, std::vector<std::size_t>{99}, ch, std::vector<ComplexVector>{symbols}),
                  InvalidInput);
}
