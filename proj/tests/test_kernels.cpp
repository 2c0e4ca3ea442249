#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "phasespace/kernels.hpp"

namespace k = phasespace::kernels;
using cplx = k::cplx;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(d(rng), d(rng));
  return v;
}

std::vector<double> random_real(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }
bool same_bits(cplx a, cplx b) { return same_bits(a.real(), b.real()) && same_bits(a.imag(), b.imag()); }

template <class T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("scalar kernels match std::complex arithmetic") {
  std::mt19937_64 rng(7);
  const auto a = random_complex(13, rng);
  const auto b = random_complex(13, rng);
  auto prod = a;
  k::scalar::cmul(prod, b);
  auto conj_prod = a;
  k::scalar::cmul_conj(conj_prod, b);
  cplx dot(0.0, 0.0);
  double n2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(prod[i] - a[i] * b[i]) < 1e-14);
    CHECK(std::abs(conj_prod[i] - a[i] * std::conj(b[i])) < 1e-14);
    dot += std::conj(a[i]) * b[i];
    n2 += std::norm(a[i]);
  }
  CHECK(std::abs(k::scalar::cdot(a, b) - dot) < 1e-12);
  CHECK(k::scalar::norm2(a) == doctest::Approx(n2).epsilon(1e-14));
}

TEST_CASE("vector kernels are bitwise identical to the scalar reference") {
  if (!k::isa_available(k::Isa::Avx2)) {
    MESSAGE("AVX2 not available on this host; equivalence checked against the scalar fallback");
  }
  std::mt19937_64 rng(42);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 16u, 31u, 64u, 129u}) {
    CAPTURE(n);
    const auto a = random_complex(n, rng);
    const auto b = random_complex(n, rng);
    const cplx alpha(0.3, -1.7);

    auto s = a, v = a;
    k::scalar::cmul(s, b);
    k::avx2::cmul(v, b);
    CHECK(same_bits(s, v));

    s = a, v = a;
    k::scalar::cmul_conj(s, b);
    k::avx2::cmul_conj(v, b);
    CHECK(same_bits(s, v));

    s = a, v = a;
    k::scalar::caxpy(s, alpha, b);
    k::avx2::caxpy(v, alpha, b);
    CHECK(same_bits(s, v));

    s = a, v = a;
    k::scalar::cscale(s, 0.731);
    k::avx2::cscale(v, 0.731);
    CHECK(same_bits(s, v));

    CHECK(same_bits(k::scalar::norm2(a), k::avx2::norm2(a)));
    CHECK(same_bits(k::scalar::cdot(a, b), k::avx2::cdot(a, b)));

    const auto x = random_real(n, rng);
    const auto y = random_real(n, rng);
    CHECK(same_bits(k::scalar::sum(x), k::avx2::sum(x)));
    CHECK(same_bits(k::scalar::dot(x, y), k::avx2::dot(x, y)));
  }
}

TEST_CASE("dispatch honours a forced instruction set") {
  k::force_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  std::mt19937_64 rng(3);
  const auto a = random_complex(33, rng);
  const double scalar_norm = k::norm2(a);
  k::force_isa(k::Isa::Avx2);
  CHECK(k::active_isa() == (k::isa_available(k::Isa::Avx2) ? k::Isa::Avx2 : k::Isa::Scalar));
  CHECK(same_bits(k::norm2(a), scalar_norm));
  k::reset_isa();
}
