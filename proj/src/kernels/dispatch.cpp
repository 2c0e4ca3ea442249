#include <atomic>
#include <cstdlib>

#include "phasespace/kernels.hpp"

namespace phasespace::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("PHASESPACE_FORCE_SCALAR"); env && env[0] == '1') return Isa::Scalar;
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(PHASESPACE_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) { current().store(isa_available(isa) ? isa : Isa::Scalar); }

void reset_isa() { current().store(detect()); }

#if defined(PHASESPACE_HAVE_AVX2)
#define PHASESPACE_DISPATCH(fn, ...) \
  (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PHASESPACE_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void cmul(std::span<cplx> a, std::span<const cplx> b) { PHASESPACE_DISPATCH(cmul, a, b); }
void cmul_conj(std::span<cplx> a, std::span<const cplx> b) { PHASESPACE_DISPATCH(cmul_conj, a, b); }
void caxpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) { PHASESPACE_DISPATCH(caxpy, y, alpha, x); }
void cscale(std::span<cplx> a, double s) { PHASESPACE_DISPATCH(cscale, a, s); }
double norm2(std::span<const cplx> a) { return PHASESPACE_DISPATCH(norm2, a); }
cplx cdot(std::span<const cplx> a, std::span<const cplx> b) { return PHASESPACE_DISPATCH(cdot, a, b); }
double sum(std::span<const double> a) { return PHASESPACE_DISPATCH(sum, a); }
double dot(std::span<const double> a, std::span<const double> b) { return PHASESPACE_DISPATCH(dot, a, b); }

#undef PHASESPACE_DISPATCH

#if !defined(PHASESPACE_HAVE_AVX2)
// Keep the symbols so the equivalence tests link on other architectures.
namespace avx2 {
void cmul(std::span<cplx> a, std::span<const cplx> b) { scalar::cmul(a, b); }
void cmul_conj(std::span<cplx> a, std::span<const cplx> b) { scalar::cmul_conj(a, b); }
void caxpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) { scalar::caxpy(y, alpha, x); }
void cscale(std::span<cplx> a, double s) { scalar::cscale(a, s); }
double norm2(std::span<const cplx> a) { return scalar::norm2(a); }
cplx cdot(std::span<const cplx> a, std::span<const cplx> b) { return scalar::cdot(a, b); }
double sum(std::span<const double> a) { return scalar::sum(a); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
}  // namespace avx2
#endif

}  // namespace phasespace::kernels
