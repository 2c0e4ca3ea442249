// Scalar reference kernels. Reductions keep four partial sums laid out like
// the lanes of one 256-bit register holding two complex numbers, so the AVX2
// variant reproduces them exactly.

#include "phasespace/kernels.hpp"

#include <cstddef>

namespace phasespace::kernels::scalar {

void cmul(std::span<cplx> a, std::span<const cplx> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    a[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void cmul_conj(std::span<cplx> a, std::span<const cplx> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = -b[i].imag();
    a[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void caxpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
  const double pr = alpha.real(), pi = alpha.imag();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (xr * pr - xi * pi), y[i].imag() + (xi * pr + xr * pi));
  }
}

void cscale(std::span<cplx> a, double s) {
  for (auto& v : a) v = cplx(v.real() * s, v.imag() * s);
}

double norm2(std::span<const cplx> a) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t pairs = a.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const cplx u = a[2 * k], v = a[2 * k + 1];
    acc[0] += u.real() * u.real();
    acc[1] += u.imag() * u.imag();
    acc[2] += v.real() * v.real();
    acc[3] += v.imag() * v.imag();
  }
  if (a.size() % 2) {
    const cplx u = a.back();
    acc[0] += u.real() * u.real();
    acc[1] += u.imag() * u.imag();
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

cplx cdot(std::span<const cplx> a, std::span<const cplx> b) {
  double re[4] = {0.0, 0.0, 0.0, 0.0};
  double im[4] = {0.0, 0.0, 0.0, 0.0};
  auto step = [&](std::size_t lane, cplx x, cplx y) {
    re[lane] += x.real() * y.real();
    re[lane + 1] += x.imag() * y.imag();
    im[lane] += x.real() * y.imag();
    im[lane + 1] += x.imag() * y.real();
  };
  const std::size_t pairs = a.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    step(0, a[2 * k], b[2 * k]);
    step(2, a[2 * k + 1], b[2 * k + 1]);
  }
  if (a.size() % 2) step(0, a.back(), b.back());
  return cplx((re[0] + re[1]) + (re[2] + re[3]), (im[0] - im[1]) + (im[2] - im[3]));
}

double sum(std::span<const double> a) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocks = a.size() / 4;
  for (std::size_t k = 0; k < blocks; ++k)
    for (std::size_t l = 0; l < 4; ++l) acc[l] += a[4 * k + l];
  for (std::size_t i = 4 * blocks; i < a.size(); ++i) acc[i % 4] += a[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocks = a.size() / 4;
  for (std::size_t k = 0; k < blocks; ++k)
    for (std::size_t l = 0; l < 4; ++l) acc[l] += a[4 * k + l] * b[4 * k + l];
  for (std::size_t i = 4 * blocks; i < a.size(); ++i) acc[i % 4] += a[i] * b[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace phasespace::kernels::scalar
