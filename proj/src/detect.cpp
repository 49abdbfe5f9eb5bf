// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "gfnoma/kernels.hpp"

namespace gfnoma {

ComplexMatrix sample_autocorrelation(std::span<const ComplexVector> blocks) {
  if (blocks.empty()) throw InvalidInput("sample_autocorrelation: no pilot blocks");
  const std::size_t n = blocks.front().size();
  if (n == 0) throw InvalidInput("sample_autocorrelation: empty pilot block");
  ComplexMatrix r(n, n);
  const double w = 1.0 / static_cast<double>(blocks.size());
  for (const auto& y : blocks) {
    if (y.size() != n) throw DimensionError("sample_autocorrelation: blocks differ in length");
    // Column j of y y^H is y * conj(y_j).
    for (std::size_t j = 0; j < n; ++j) kernels::axpy(w * std::conj(y[j]), y, r.col(j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    r(j, j) = r(j, j).real();
    for (std::size_t i = 0; i < j; ++i) {
      const cdouble v = 0.5 * (r(i, j) + std::conj(r(j, i)));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

double bic_score(std::span<const double> eigenvalues, std::size_t ka, double noise_var, std::size_t num_blocks) {
  const std::size_t lp = eigenvalues.size();
  if (lp == 0) throw InvalidInput("bic_score: no eigenvalues");
  if (ka > lp) throw InvalidInput("bic_score: ka exceeds the pilot length");
  if (!(noise_var > 0.0)) throw InvalidInput("bic_score: noise variance must be positive");
  if (num_blocks == 0) throw InvalidInput("bic_score: need at least one pilot block");

  const double floor = std::max(kBicEigenFloor * eigenvalues.front(), std::numeric_limits<double>::min());
  const double b = static_cast<double>(num_blocks);
  const double l = static_cast<double>(lp);
  const double k = static_cast<double>(ka);

  double likelihood = 0.0;
  for (std::size_t i = 0; i < lp; ++i) {
    const double lhat = eigenvalues[i];
    const double lbar = i < ka ? std::max(lhat, floor) : noise_var;
    likelihood += lhat / lbar + std::log(lbar);
  }
  return b * likelihood + b * l * std::log(std::numbers::pi) + 0.5 * k * (2.0 * l - k) * std::log(b);
}

std::size_t estimate_ka(std::span<const double> eigenvalues, double noise_var, std::size_t num_blocks,
                        std::size_t ka_max) {
  if (eigenvalues.empty()) throw InvalidInput("estimate_ka: no eigenvalues");
  if (ka_max >= eigenvalues.size()) throw InvalidInput("estimate_ka: ka_max must be below the pilot length");
  if (!(eigenvalues.front() > 0.0)) return 0;
  std::size_t best = 0;
  double best_score = bic_score(eigenvalues, 0, noise_var, num_blocks);
  for (std::size_t ka = 1; ka <= ka_max; ++ka) {
    const double score = bic_score(eigenvalues, ka, noise_var, num_blocks);
    if (score < best_score) {
      best_score = score;
      best = ka;
    }
  }
  return best;
}

std::size_t estimate_ka(const ComplexMatrix& r, double noise_var, std::size_t num_blocks, std::size_t ka_max) {
  const auto eig = hermitian_eigendecompose(r);
  return estimate_ka(eig.eigenvalues, noise_var, num_blocks, ka_max);
}

DetectionResult music_active_set(const EigenDecomposition& eig, const Codebook& pilot_cb, std::size_t ka) {
  const std::size_t lp = eig.eigenvalues.size();
  if (pilot_cb.length() != lp) throw DimensionError("music_active_set: codebook length != matrix dimension");
  if (ka >= lp) throw InvalidInput("music_active_set: ka must be below the pilot length");

  DetectionResult out;
  out.estimated_ka = ka;
  out.eigenvalues = eig.eigenvalues;
  out.music_spectrum.resize(pilot_cb.size());
  for (std::size_t k = 0; k < pilot_cb.size(); ++k) {
    const auto a = pilot_cb.signature(k);
    double energy = 0.0;
    for (std::size_t i = ka; i < lp; ++i) energy += std::norm(kernels::dot(eig.eigenvectors.col(i), a));
    out.music_spectrum[k] = energy < kMusicFloor ? kMusicCap : 1.0 / energy;
  }

  std::vector<std::size_t> order(pilot_cb.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return out.music_spectrum[i] > out.music_spectrum[j]; });
  out.active_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(ka, order.size())));
  std::sort(out.active_set.begin(), out.active_set.end());
  return out;
}

DetectionResult music_active_set(const ComplexMatrix& r, const Codebook& pilot_cb, std::size_t ka) {
  return music_active_set(hermitian_eigendecompose(r), pilot_cb, ka);
}

DetectionResult detect(std::span<const ComplexVector> blocks, const Codebook& pilot_cb, double noise_var,
                       std::size_t ka_max) {
  const auto r = sample_autocorrelation(blocks);
  const auto eig = hermitian_eigendecompose(r);
  const std::size_t ka = estimate_ka(eig.eigenvalues, noise_var, blocks.size(), ka_max);
  return music_active_set(eig, pilot_cb, ka);
}

}  // namespace gfnoma
