// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gfnoma/kernels.hpp"
#include "oracles.hpp"

using namespace gfnoma;
namespace k = gfnoma::kernels;

namespace {

std::vector<k::Isa> available() {
  std::vector<k::Isa> out;
  for (const auto isa : {k::Isa::scalar, k::Isa::avx2, k::Isa::neon})
    if (k::isa_supported(isa)) out.push_back(isa);
  return out;
}

double scale(const ComplexVector& a, const ComplexVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i]) * std::abs(b[i]);
  return std::max(s, 1.0);
}

}  // namespace

TEST_CASE("scalar kernels match plain loops") {
  const auto& t = k::table(k::Isa::scalar);
  std::mt19937_64 rng(1);
  const auto a = oracle::random_vector(9, rng);
  const auto b = oracle::random_vector(9, rng);
  cdouble dot = 0.0;
  double n2 = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    dot += std::conj(a[i]) * b[i];
    n2 += std::norm(a[i]);
  }
  CHECK(std::abs(t.dot(a.data(), b.data(), 9) - dot) < 1e-12);
  CHECK(t.norm2(a.data(), 9) == doctest::Approx(n2).epsilon(1e-14));
}

TEST_CASE("every available ISA agrees with the scalar reference") {
  const auto& ref = k::table(k::Isa::scalar);
  std::mt19937_64 rng(2);
  for (const auto isa : available()) {
    CAPTURE(k::isa_name(isa));
    const auto& t = k::table(isa);
    CHECK(t.isa == isa);
    for (std::size_t n = 0; n <= 37; ++n) {
      const auto a = oracle::random_vector(n, rng);
      const auto b = oracle::random_vector(n, rng);
      const double tol = 1e-13 * scale(a, b);
      CHECK(std::abs(t.dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= tol);
      CHECK(std::abs(t.norm2(a.data(), n) - ref.norm2(a.data(), n)) <= 1e-13 * scale(a, a));

      const cdouble alpha{0.3, -1.7};
      auto y1 = b, y2 = b;
      ref.axpy(alpha, a.data(), y1.data(), n);
      t.axpy(alpha, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-13 * (1.0 + std::abs(y1[i])));

      const k::PairTransform tr{{0.6, 0.1}, {-0.2, 0.7}, {0.5, -0.4}, {0.9, 0.3}};
      auto x1 = a, x2 = a, z1 = b, z2 = b;
      ref.transform_pair(x1.data(), z1.data(), n, tr);
      t.transform_pair(x2.data(), z2.data(), n, tr);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(x1[i] - x2[i]) <= 1e-13 * (1.0 + std::abs(x1[i])));
        CHECK(std::abs(z1[i] - z2[i]) <= 1e-13 * (1.0 + std::abs(z1[i])));
      }
    }
  }
}

TEST_CASE("transform_pair applies the documented 2x2 map") {
  ComplexVector x{{1, 2}}, y{{3, -1}};
  const k::PairTransform t{{2, 0}, {0, 1}, {1, 1}, {-1, 0}};
  k::transform_pair(x, y, t);
  CHECK(x[0] == cdouble(2, 4) + cdouble(0, 1) * cdouble(3, -1));
  CHECK(y[0] == cdouble(1, 1) * cdouble(1, 2) - cdouble(3, -1));
}

TEST_CASE("dispatch selection and naming") {
  const auto before = k::active().isa;
  for (const auto isa : available()) {
    k::select(isa);
    CHECK(k::active().isa == isa);
    CHECK(k::parse_isa(k::isa_name(isa)) == isa);
  }
  k::select(before);
  CHECK(k::isa_supported(k::Isa::scalar));
  CHECK(k::isa_supported(k::best_available()));
  CHECK_FALSE(k::parse_isa("sse9").has_value());
  for (const auto isa : {k::Isa::avx2, k::Isa::neon})
    if (!k::isa_supported(isa)) CHECK_THROWS_AS(k::table(isa), InvalidInput);
}

TEST_CASE("span wrappers check lengths") {
  ComplexVector a(3), b(4);
  CHECK_THROWS_AS(k::dot(a, b), DimensionError);
  CHECK_THROWS_AS(k::axpy(1.0, a, b), DimensionError);
  CHECK_THROWS_AS(k::transform_pair(a, b, {}), DimensionError);
}
