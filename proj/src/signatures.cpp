// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/signatures.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gfnoma/kernels.hpp"

namespace gfnoma {

namespace {

constexpr double kUnitNormTolerance = 1e-10;
constexpr double kLoadNormTolerance = 1e-6;

void check_unit_columns(const ComplexMatrix& m, double tolerance) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const double norm = std::sqrt(kernels::norm2(m.col(k)));
    if (!(std::abs(norm - 1.0) <= tolerance)) {
      throw ValidationError("codebook column " + std::to_string(k) + " has norm " + std::to_string(norm));
    }
  }
}

void normalize_columns(ComplexMatrix& m) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    auto col = m.col(k);
    const double norm = std::sqrt(kernels::norm2(col));
    for (auto& v : col) v /= norm;
  }
}

// Rotate every column so that its first non-negligible entry is real and positive.
void canonical_phase(ComplexMatrix& m) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    auto col = m.col(k);
    for (std::size_t i = 0; i < col.size(); ++i) {
      const double mag = std::abs(col[i]);
      if (mag > 1e-12) {
        const cdouble rot = std::conj(col[i]) / mag;
        for (auto& w : col) w *= rot;
        col[i] = mag;
        break;
      }
    }
  }
}

double coherence_of(const ComplexMatrix& m) {
  double worst = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < j; ++i) worst = std::max(worst, std::abs(kernels::dot(m.col(i), m.col(j))));
  return std::min(worst, 1.0);
}

}  // namespace

Codebook::Codebook(ComplexMatrix signatures) : signatures_(std::move(signatures)) {
  if (signatures_.rows() == 0 || signatures_.cols() == 0) throw ValidationError("codebook is empty");
  check_unit_columns(signatures_, kUnitNormTolerance);
}

double welch_bound(std::size_t length, std::size_t size) {
  if (length == 0 || size < 2 || size < length) throw InvalidInput("welch_bound: need size >= length >= 1, size >= 2");
  const double l = static_cast<double>(length);
  const double k = static_cast<double>(size);
  return std::sqrt((k - l) / (l * (k - 1.0)));
}

double coherence(const Codebook& cb) {
  if (cb.size() < 2) throw InvalidInput("coherence: codebook needs at least two signatures");
  return coherence_of(cb.matrix());
}

Codebook generate_grassmannian(std::size_t length, std::size_t size, std::uint64_t seed,
                               std::size_t iterations) {
  if (length == 0 || size < length)
    throw InvalidInput("generate_grassmannian: need size >= length >= 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix frame(length, size);
  for (auto& v : frame.data()) v = {normal(rng), normal(rng)};
  normalize_columns(frame);

  if (size == 1) {
    canonical_phase(frame);
    return Codebook(std::move(frame));
  }

  ComplexMatrix best = frame;
  double best_coherence = coherence_of(frame);
  const double target = welch_bound(length, size);
  const double tight_scale = static_cast<double>(size) / static_cast<double>(length);

  for (std::size_t it = 0; it < iterations; ++it) {
    // Structural projection: unit diagonal, off-diagonal magnitude <= target.
    ComplexMatrix g = gram(frame);
    for (std::size_t j = 0; j < size; ++j) {
      g(j, j) = 1.0;
      for (std::size_t i = 0; i < size; ++i) {
        if (i == j) continue;
        const double mag = std::abs(g(i, j));
        if (mag > target) g(i, j) *= target / mag;
      }
    }
    // Spectral projection onto tight frames of rank `length`: keep the leading
    // eigenvectors with every retained eigenvalue equal to size/length.
    const auto eig = hermitian_eigendecompose(g);
    for (std::size_t r = 0; r < length; ++r)
      for (std::size_t c = 0; c < size; ++c)
        frame(r, c) = std::sqrt(tight_scale) * std::conj(eig.eigenvectors(c, r));
    normalize_columns(frame);

    const double coh = coherence_of(frame);
    if (coh < best_coherence) {
      best_coherence = coh;
      best = frame;
    }
  }
  canonical_phase(best);
  normalize_columns(best);
  return Codebook(std::move(best));
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_codebook: cannot open " + path.string());
  out << cb.length() << ' ' << cb.size() << '\n';
  char buf[64];
  const auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
  };
  for (std::size_t k = 0; k < cb.size(); ++k) {
    for (const auto& v : cb.signature(k)) {
      put(v.real());
      out << ' ';
      put(v.imag());
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("save_codebook: write failed for " + path.string());
}

namespace {

double parse_double(std::string_view token, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + std::string(token) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view token, const std::filesystem::path& path) {
  std::size_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || v == 0) {
    throw ParseError(path.string() + ":1: bad dimension '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

Codebook load_codebook(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_codebook: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  std::istringstream header(line);
  std::string ls, ks, extra;
  if (!(header >> ls >> ks) || (header >> extra)) throw ParseError(path.string() + ":1: expected 'L K'");
  const std::size_t length = parse_count(ls, path);
  const std::size_t size = parse_count(ks, path);

  ComplexMatrix m(length, size);
  std::size_t line_no = 1;
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t r = 0; r < length; ++r) {
      ++line_no;
      if (!std::getline(in, line)) throw ParseError(path.string() + ": truncated after line " + std::to_string(line_no - 1));
      std::istringstream fields(line);
      std::string re, im;
      if (!(fields >> re >> im) || (fields >> extra))
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 're im'");
      m(r, k) = {parse_double(re, path, line_no), parse_double(im, path, line_no)};
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": trailing data");
  }

  try {
    check_unit_columns(m, kLoadNormTolerance);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  // Within the load tolerance but outside the strict invariant: renormalize.
  for (std::size_t k = 0; k < size; ++k) {
    const double norm = std::sqrt(kernels::norm2(m.col(k)));
    if (std::abs(norm - 1.0) > kUnitNormTolerance)
      for (auto& v : m.col(k)) v /= norm;
  }
  return Codebook(std::move(m));
}

MaskingTable::MaskingTable(std::size_t num_users, std::size_t num_blocks, std::vector<std::int8_t> entries)
    : num_users_(num_users), num_blocks_(num_blocks), entries_(std::move(entries)) {
  if (entries_.size() != num_users_ * num_blocks_) throw DimensionError("MaskingTable: entry count mismatch");
  for (const auto e : entries_)
    if (e != 1 && e != -1) throw ValidationError("MaskingTable: entries must be +1 or -1");
}

MaskingTable generate_masking(std::size_t num_users, std::size_t num_blocks, std::uint64_t seed) {
  if (num_users == 0 || num_blocks == 0) throw InvalidInput("generate_masking: counts must be >= 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::int8_t> entries(num_users * num_blocks);
  for (auto& e : entries) e = coin(rng) ? 1 : -1;
  return MaskingTable(num_users, num_blocks, std::move(entries));
}

}  // namespace gfnoma
