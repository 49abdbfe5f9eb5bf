// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "gfnoma/linalg.hpp"

namespace gfnoma {

// Set of unit-norm spreading signatures stored as the columns of a
// length x size matrix.
class Codebook {
 public:
  // Throws ValidationError if a column norm differs from 1 by more than 1e-10
  // or the matrix is empty.
  explicit Codebook(ComplexMatrix signatures);

  std::size_t length() const { return signatures_.rows(); }
  std::size_t size() const { return signatures_.cols(); }
  std::span<const cdouble> signature(std::size_t k) const { return signatures_.col(k); }
  const ComplexMatrix& matrix() const { return signatures_; }

 private:
  ComplexMatrix signatures_;
};

// sqrt((K - L) / (L (K - 1))) for K >= L vectors in dimension L.
double welch_bound(std::size_t length, std::size_t size);

// Largest |a_i^H a_j| over distinct pairs. Throws InvalidInput for size < 2.
double coherence(const Codebook& cb);

// Low-coherence codebook by alternating projection between the set of Gram
// matrices with bounded off-diagonal magnitude and the rank-`length` PSD
// cone. Returns the best iterate seen (the random start for iterations == 0).
// Columns are phase-normalized so that their first entry is real and
// non-negative. Requires size >= length >= 1.
Codebook generate_grassmannian(std::size_t length, std::size_t size, std::uint64_t seed,
                               std::size_t iterations = 1000);

// Text format: first line "L K", then L*K lines "re im" in column-major order.
// Values are written in shortest round-trip form.
void save_codebook(const Codebook& cb, const std::filesystem::path& path);
// Throws ParseError on malformed input and ValidationError when a column norm
// differs from 1 by more than 1e-6.
Codebook load_codebook(const std::filesystem::path& path);

// Per-user +-1 masking coefficient for every pilot-block position. Row index
// equals the pilot signature index it is paired with.
class MaskingTable {
 public:
  MaskingTable(std::size_t num_users, std::size_t num_blocks, std::vector<std::int8_t> entries);

  std::size_t num_users() const { return num_users_; }
  std::size_t num_blocks() const { return num_blocks_; }
  double at(std::size_t user, std::size_t block) const {
    return entries_[user * num_blocks_ + block];
  }
  std::span<const std::int8_t> row(std::size_t user) const {
    return {entries_.data() + user * num_blocks_, num_blocks_};
  }

 private:
  std::size_t num_users_;
  std::size_t num_blocks_;
  std::vector<std::int8_t> entries_;
};

MaskingTable generate_masking(std::size_t num_users, std::size_t num_blocks, std::uint64_t seed);

}  // namespace gfnoma
