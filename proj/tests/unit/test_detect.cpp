// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <numeric>

#include "gfnoma/detect.hpp"
#include "oracles.hpp"

using namespace gfnoma;

namespace {

// y_i = sum_k sqrt(p_k) a_k h_{k,i} + n_i with i.i.d. CN(0,1) channels.
std::vector<ComplexVector> iid_blocks(const Codebook& cb, const std::vector<std::size_t>& active, double power,
                                      double noise_var, std::size_t num_blocks, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  const std::size_t lp = cb.length();
  std::vector<ComplexVector> blocks(num_blocks, ComplexVector(lp));
  for (auto& y : blocks) {
    for (const auto k : active) {
      const cdouble h(g(rng), g(rng));
      for (std::size_t j = 0; j < lp; ++j) y[j] += std::sqrt(power) * h * cb.signature(k)[j];
    }
    for (auto& v : y) v += std::sqrt(noise_var) * cdouble(g(rng), g(rng));
  }
  return blocks;
}

}  // namespace

TEST_CASE("sample autocorrelation is the block average of outer products") {
  std::mt19937_64 rng(1);
  std::vector<ComplexVector> blocks{oracle::random_vector(3, rng), oracle::random_vector(3, rng)};
  const auto r = sample_autocorrelation(blocks);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const cdouble e = 0.5 * (blocks[0][i] * std::conj(blocks[0][j]) + blocks[1][i] * std::conj(blocks[1][j]));
      CHECK(std::abs(r(i, j) - e) < 1e-12);
    }
  CHECK(hermitian_defect(r) == 0.0);
  for (const double l : hermitian_eigendecompose(r).eigenvalues) CHECK(l >= -1e-12);
  CHECK_THROWS_AS(sample_autocorrelation({}), InvalidInput);
  std::vector<ComplexVector> ragged{ComplexVector(3), ComplexVector(2)};
  CHECK_THROWS_AS(sample_autocorrelation(ragged), DimensionError);
}

TEST_CASE("BIC closed form on pure-noise eigenvalues") {
  const std::vector<double> eig{1.0, 1.0};
  const double bic0 = 24.0 * 2.0 + 48.0 * std::log(std::numbers::pi);
  CHECK(bic_score(eig, 0, 1.0, 24) == doctest::Approx(bic0).epsilon(1e-14));
  CHECK(bic_score(eig, 1, 1.0, 24) == doctest::Approx(bic0 + 1.5 * std::log(24.0)).epsilon(1e-14));
  CHECK(estimate_ka(eig, 1.0, 24, 1) == 0);
}

TEST_CASE("BIC penalty increases with ka at equal likelihood") {
  const std::vector<double> eig(12, 1.0);
  double prev = bic_score(eig, 0, 1.0, 24);
  for (std::size_t ka = 1; ka < 12; ++ka) {
    const double s = bic_score(eig, ka, 1.0, 24);
    CHECK(s > prev);
    prev = s;
  }
  CHECK_THROWS_AS(bic_score(eig, 13, 1.0, 24), InvalidInput);
  CHECK_THROWS_AS(bic_score(eig, 1, 0.0, 24), InvalidInput);
}

TEST_CASE("estimate_ka edge cases") {
  const std::vector<double> zero(12, 0.0);
  CHECK(estimate_ka(zero, 1.0, 24, 11) == 0);
  CHECK(estimate_ka(ComplexMatrix(12, 12), 1.0, 24, 11) == 0);
  const std::vector<double> eig(4, 1.0);
  CHECK_THROWS_AS(estimate_ka(eig, 1.0, 24, 4), InvalidInput);
  const std::vector<double> strong{500.0, 300.0, 1.0, 1.0};
  CHECK(estimate_ka(strong, 1.0, 24, 3) == 2);
}

TEST_CASE("BIC recovers six users on high-SNR i.i.d. snapshots") {
  const auto cb = generate_grassmannian(12, 32, 3, 200);
  std::mt19937_64 rng(4);
  int exact = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<std::size_t> all(32);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::size_t> active(all.begin(), all.begin() + 6);
    std::sort(active.begin(), active.end());
    const auto blocks = iid_blocks(cb, active, 100.0, 1.0, 24, rng);
    const auto det = detect(blocks, cb, 1.0, 11);
    exact += det.estimated_ka == 6;
  }
  CHECK(exact >= 90);
}

TEST_CASE("MUSIC ranks the true signatures highest on an exact model") {
  const auto cb = generate_grassmannian(12, 32, 3, 200);
  const std::vector<std::size_t> active{1, 7, 12, 20, 31};
  ComplexMatrix r = ComplexMatrix::identity(12);
  for (std::size_t i = 0; i < active.size(); ++i) {
    const auto a = cb.signature(active[i]);
    for (std::size_t p = 0; p < 12; ++p)
      for (std::size_t q = 0; q < 12; ++q) r(p, q) += (10.0 + i) * a[p] * std::conj(a[q]);
  }
  const auto res = music_active_set(r, cb, 5);
  CHECK(res.active_set == active);
  CHECK(res.music_spectrum.size() == 32);
  for (const auto k : active) CHECK(res.music_spectrum[k] == kMusicCap);
  const auto none = music_active_set(r, cb, 0);
  CHECK(none.active_set.empty());
  for (const double m : none.music_spectrum) CHECK(m == doctest::Approx(1.0));
  CHECK_THROWS_AS(music_active_set(r, cb, 12), InvalidInput);
}

TEST_CASE("detection on pure noise finds nobody") {
  const auto cb = generate_grassmannian(12, 32, 3, 50);
  std::mt19937_64 rng(9);
  int empty = 0;
  for (int t = 0; t < 100; ++t) empty += detect(iid_blocks(cb, {}, 0.0, 1.0, 24, rng), cb, 1.0, 11).estimated_ka == 0;
  CHECK(empty >= 99);
}
