// SPDX-License-Identifier: Apache-2.0
#pragma once

// Subspace activity detection: sample autocorrelation of the received pilot
// blocks, BIC model-order selection with known noise power, and the MUSIC
// pseudo-spectrum over the pilot codebook.

#include <span>

#include "gfnoma/linalg.hpp"
#include "gfnoma/signatures.hpp"

namespace gfnoma {

inline constexpr double kMusicCap = 1e12;
inline constexpr double kMusicFloor = 1e-12;
inline constexpr double kBicEigenFloor = 1e-12;

struct DetectionResult {
  std::size_t estimated_ka = 0;
  std::vector<double> music_spectrum;      // one entry per codebook signature
  std::vector<std::size_t> active_set;     // ascending signature indices
  std::vector<double> eigenvalues;         // of the sample autocorrelation, descending
};

// (1/B) sum_i y_i y_i^H. Throws InvalidInput for no blocks and DimensionError
// for ragged blocks.
ComplexMatrix sample_autocorrelation(std::span<const ComplexVector> blocks);

// BIC(ka) = B sum_k (lhat_k / lbar_k + ln lbar_k) + B L ln(pi)
//           + (ka / 2)(2L - ka) ln B,
// with lbar_k = lhat_k (floored at 1e-12 * lhat_1) for k <= ka and noise_var
// otherwise. `eigenvalues` must be sorted descending.
double bic_score(std::span<const double> eigenvalues, std::size_t ka, double noise_var, std::size_t num_blocks);

// argmin over ka in [0, ka_max] of bic_score; ties go to the smaller ka.
// Requires ka_max < L_p. A matrix without positive eigenvalues yields 0.
std::size_t estimate_ka(std::span<const double> eigenvalues, double noise_var, std::size_t num_blocks,
                        std::size_t ka_max);
std::size_t estimate_ka(const ComplexMatrix& r, double noise_var, std::size_t num_blocks, std::size_t ka_max);

// Noise subspace from the L_p - ka smallest eigenvalues, M(k) = 1 / ||U_n^H a_k||^2
// (capped at 1e12), and the ka highest-scoring signatures (ties to the lower
// index). ka = 0 treats the whole space as noise and returns an empty set.
DetectionResult music_active_set(const EigenDecomposition& eig, const Codebook& pilot_cb, std::size_t ka);
DetectionResult music_active_set(const ComplexMatrix& r, const Codebook& pilot_cb, std::size_t ka);

// Full pipeline: autocorrelation, BIC order estimate, MUSIC selection.
DetectionResult detect(std::span<const ComplexVector> blocks, const Codebook& pilot_cb, double noise_var,
                       std::size_t ka_max);

}  // namespace gfnoma
