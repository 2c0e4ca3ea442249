// AVX2 variants. One __m256d holds two interleaved complex doubles
// [re0, im0, re1, im1]. Products are formed with mul + addsub (no FMA) in
// the same order as the scalar reference.

#include "phasespace/kernels.hpp"

#include <immintrin.h>

#include <cstddef>

namespace phasespace::kernels::avx2 {

namespace {

inline const double* raw(std::span<const cplx> s) { return reinterpret_cast<const double*>(s.data()); }
inline double* raw(std::span<cplx> s) { return reinterpret_cast<double*>(s.data()); }

// [ar*br - ai*bi, ai*br + ar*bi] per complex slot
inline __m256d mul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0b1111);
  const __m256d a_sw = _mm256_permute_pd(a, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_sw, b_im));
}

}  // namespace

void cmul(std::span<cplx> a, std::span<const cplx> b) {
  double* pa = raw(a);
  const double* pb = raw(b);
  const std::size_t pairs = a.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const __m256d va = _mm256_loadu_pd(pa + 4 * k);
    const __m256d vb = _mm256_loadu_pd(pb + 4 * k);
    _mm256_storeu_pd(pa + 4 * k, mul2(va, vb));
  }
  if (a.size() % 2) scalar::cmul(a.subspan(2 * pairs), b.subspan(2 * pairs));
}

void cmul_conj(std::span<cplx> a, std::span<const cplx> b) {
  double* pa = raw(a);
  const double* pb = raw(b);
  const __m256d kConjMask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  const std::size_t pairs = a.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const __m256d va = _mm256_loadu_pd(pa + 4 * k);
    const __m256d vb = _mm256_xor_pd(_mm256_loadu_pd(pb + 4 * k), kConjMask);
    _mm256_storeu_pd(pa + 4 * k, mul2(va, vb));
  }
  if (a.size() % 2) scalar::cmul_conj(a.subspan(2 * pairs), b.subspan(2 * pairs));
}

void caxpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
  double* py = raw(y);
  const double* px = raw(x);
  const __m256d al = _mm256_set_pd(alpha.imag(), alpha.real(), alpha.imag(), alpha.real());
  const std::size_t pairs = y.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const __m256d vx = _mm256_loadu_pd(px + 4 * k);
    const __m256d vy = _mm256_loadu_pd(py + 4 * k);
    _mm256_storeu_pd(py + 4 * k, _mm256_add_pd(vy, mul2(vx, al)));
  }
  if (y.size() % 2) scalar::caxpy(y.subspan(2 * pairs), alpha, x.subspan(2 * pairs));
}

void cscale(std::span<cplx> a, double s) {
  double* pa = raw(a);
  const __m256d vs = _mm256_set1_pd(s);
  const std::size_t pairs = a.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k)
    _mm256_storeu_pd(pa + 4 * k, _mm256_mul_pd(_mm256_loadu_pd(pa + 4 * k), vs));
  if (a.size() % 2) scalar::cscale(a.subspan(2 * pairs), s);
}

double norm2(std::span<const cplx> a) {
  const double* pa = raw(a);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t pairs = a.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const __m256d v = _mm256_loadu_pd(pa + 4 * k);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  if (a.size() % 2) {
    const cplx u = a.back();
    lanes[0] += u.real() * u.real();
    lanes[1] += u.imag() * u.imag();
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

cplx cdot(std::span<const cplx> a, std::span<const cplx> b) {
  const double* pa = raw(a);
  const double* pb = raw(b);
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  const std::size_t pairs = a.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const __m256d va = _mm256_loadu_pd(pa + 4 * k);
    const __m256d vb = _mm256_loadu_pd(pb + 4 * k);
    re = _mm256_add_pd(re, _mm256_mul_pd(va, vb));
    im = _mm256_add_pd(im, _mm256_mul_pd(va, _mm256_permute_pd(vb, 0b0101)));
  }
  alignas(32) double r[4];
  alignas(32) double i[4];
  _mm256_store_pd(r, re);
  _mm256_store_pd(i, im);
  if (a.size() % 2) {
    const cplx x = a.back(), y = b.back();
    r[0] += x.real() * y.real();
    r[1] += x.imag() * y.imag();
    i[0] += x.real() * y.imag();
    i[1] += x.imag() * y.real();
  }
  return cplx((r[0] + r[1]) + (r[2] + r[3]), (i[0] - i[1]) + (i[2] - i[3]));
}

double sum(std::span<const double> a) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t blocks = a.size() / 4;
  for (std::size_t k = 0; k < blocks; ++k) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a.data() + 4 * k));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t i = 4 * blocks; i < a.size(); ++i) lanes[i % 4] += a[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot(std::span<const double> a, std::span<const double> b) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t blocks = a.size() / 4;
  for (std::size_t k = 0; k < blocks; ++k)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a.data() + 4 * k), _mm256_loadu_pd(b.data() + 4 * k)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t i = 4 * blocks; i < a.size(); ++i) lanes[i % 4] += a[i] * b[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace phasespace::kernels::avx2
