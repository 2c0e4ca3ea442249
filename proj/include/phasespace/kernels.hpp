#pragma once

// Data-parallel inner loops shared by every module. Each kernel has a scalar
// reference implementation and an AVX2 variant; the variant is picked at
// runtime from the CPU feature bits. Both variants use the same lane layout
// for reductions and no fused multiply-add, so they agree bit for bit.

#include <complex>
#include <span>
#include <string_view>

namespace phasespace::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// True when the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa);

/// Variant used by the dispatching entry points below.
Isa active_isa();

/// Pins the dispatcher to `isa` (tests use this to compare variants).
/// Falls back to Scalar when the requested variant is unavailable.
void force_isa(Isa isa);

/// Restores the automatic choice.
void reset_isa();

// a[i] *= b[i]
void cmul(std::span<cplx> a, std::span<const cplx> b);
// a[i] *= conj(b[i])
void cmul_conj(std::span<cplx> a, std::span<const cplx> b);
// y[i] += alpha * x[i]
void caxpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x);
// a[i] *= s
void cscale(std::span<cplx> a, double s);
// sum |a[i]|^2
double norm2(std::span<const cplx> a);
// sum conj(a[i]) * b[i]
cplx cdot(std::span<const cplx> a, std::span<const cplx> b);
// sum a[i]
double sum(std::span<const double> a);
// sum a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

// Per-variant entry points, exposed for equivalence testing.
namespace scalar {
void cmul(std::span<cplx> a, std::span<const cplx> b);
void cmul_conj(std::span<cplx> a, std::span<const cplx> b);
void caxpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x);
void cscale(std::span<cplx> a, double s);
double norm2(std::span<const cplx> a);
cplx cdot(std::span<const cplx> a, std::span<const cplx> b);
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
void cmul(std::span<cplx> a, std::span<const cplx> b);
void cmul_conj(std::span<cplx> a, std::span<const cplx> b);
void caxpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x);
void cscale(std::span<cplx> a, double s);
double norm2(std::span<const cplx> a);
cplx cdot(std::span<const cplx> a, std::span<const cplx> b);
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

}  // namespace phasespace::kernels
