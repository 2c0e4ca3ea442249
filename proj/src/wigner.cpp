#include "phasespace/wigner.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/fourier.hpp"
#include "phasespace/kernels.hpp"

namespace phasespace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAliasLimit = 1e-8;

std::size_t wrap(long idx, std::size_t period) {
  const long p = static_cast<long>(period);
  return static_cast<std::size_t>(((idx % p) + p) % p);
}

// Offset products for one axis, transformed along the offset index.
//
// Row r holds f_m = a(2r + m) conj(b(2r - m)) on the doubled lattice, weighted by
// phase(m). On a ring the samples wrap and m spans one period, [-n/2, n/2). On a
// line the state is zero outside the box and m spans [-n, n), which reaches every
// pair of points inside it; the p nodes are then the even bins of the longer
// transform. The two extreme offsets share one DFT slot and are averaged.
struct OffsetTable {
  std::vector<cplx> rows;
  std::size_t window = 0;
  std::size_t stride = 1;

  cplx at(std::size_t r, std::size_t bin) const { return rows[r * window + stride * bin]; }
};

template <class Phase>
OffsetTable offset_table(std::span<const cplx> a_fine, std::span<const cplx> b_fine, std::size_t n, bool periodic,
                         Phase&& phase, fourier::Direction dir) {
  const std::size_t window = periodic ? n : 2 * n;
  const long half = static_cast<long>(window / 2);
  const long fine = static_cast<long>(2 * n);
  auto sample = [&](std::span<const cplx> v, long idx) {
    if (periodic) return v[wrap(idx, v.size())];
    return (idx < 0 || idx >= fine) ? cplx(0.0, 0.0) : v[static_cast<std::size_t>(idx)];
  };
  OffsetTable t{std::vector<cplx>(n * window), window, window / n};
  for (std::size_t r = 0; r < n; ++r) {
    const long c = 2 * static_cast<long>(r);
    cplx* row = t.rows.data() + r * window;
    for (long m = -half + 1; m < half; ++m)
      row[wrap(m, window)] = phase(m) * sample(a_fine, c + m) * std::conj(sample(b_fine, c - m));
    const cplx lo = sample(a_fine, c - half) * std::conj(sample(b_fine, c + half));
    const cplx hi = sample(a_fine, c + half) * std::conj(sample(b_fine, c - half));
    row[wrap(-half, window)] = 0.5 * (phase(-half) * lo + phase(half) * hi);
  }
  fourier::fft_rows(t.rows, n, window, dir);
  return t;
}

double peak(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

// A line state must vanish where the box cuts it off, or the zero extension
// beyond the box feeds a spurious edge into the offset transform.
void check_alias(std::span<const cplx> a_fine, std::span<const cplx> b_fine, double scale, bool periodic) {
  if (periodic) return;
  const double edge_a = std::max(std::abs(a_fine.front()), std::abs(a_fine.back()));
  const double edge_b = std::max(std::abs(b_fine.front()), std::abs(b_fine.back()));
  const double edge = std::max(edge_a * peak(b_fine), edge_b * peak(a_fine));
  if (edge > kAliasLimit * scale)
    throw Error(ErrorCode::AliasingDetected, "Wigner offset integrand does not vanish at the window edge");
}

// Momentum samples on the doubled lattice. On a ring momentum is quantized, so
// the half-step samples are empty; on a line they are band-limited interpolants.
std::vector<cplx> refine_momentum(const MomentumWaveFunction& psi) {
  if (!psi.grid.periodic_q()) return fourier::upsample2(psi.values);
  std::vector<cplx> out(2 * psi.values.size(), cplx(0.0, 0.0));
  for (std::size_t k = 0; k < psi.values.size(); ++k) out[2 * k] = psi.values[k];
  return out;
}

CrossWignerField cross_from_momentum(const MomentumWaveFunction& a, const MomentumWaveFunction& b) {
  const PhaseGrid& g = a.grid;
  g.require_reciprocal();
  const std::size_t n = g.n_q();
  const double dp = g.dp();
  const double hbar = g.hbar();
  const double q0 = g.q_min();
  const auto af = refine_momentum(a);
  const auto bf = refine_momentum(b);
  check_alias(af, bf, std::sqrt(a.norm_squared() * b.norm_squared()), g.periodic_q());
  // u = m dp; the kernel e^{i q u / hbar} splits into a q_min phase and the DFT.
  const auto t = offset_table(af, bf, n, g.periodic_q(),
                              [&](long m) { return std::polar(1.0, q0 * static_cast<double>(m) * dp / hbar); },
                              fourier::Direction::Backward);
  CrossWignerField w{g, std::vector<cplx>(n * n)};
  const double scale = dp / (2.0 * kPi * hbar);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) w.values[j * n + k] = scale * t.at(k, j);
  return w;
}

}  // namespace

double WignerField::integral() const { return kernels::sum(values) * grid.dq() * grid.dp(); }

double WignerField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

cplx CrossWignerField::integral() const {
  cplx acc(0.0, 0.0);
  for (const cplx& v : values) acc += v;
  return acc * grid.dq() * grid.dp();
}

WignerField CrossWignerField::real_part() const {
  WignerField w{grid, std::vector<double>(values.size())};
  for (std::size_t i = 0; i < values.size(); ++i) w.values[i] = values[i].real();
  return w;
}

CrossWignerField CrossWignerField::conjugate() const {
  CrossWignerField w{grid, values};
  for (auto& v : w.values) v = std::conj(v);
  return w;
}

CrossWignerField cross_wigner(const WaveFunction& psi_i, const WaveFunction& psi_j) {
  if (!psi_i.grid.same_as(psi_j.grid)) throw Error(ErrorCode::GridMismatch, "cross Wigner needs a shared grid");
  const PhaseGrid& g = psi_i.grid;
  g.require_reciprocal();
  const std::size_t n = g.n_q();
  const auto af = fourier::upsample2(psi_i.values);
  const auto bf = fourier::upsample2(psi_j.values);
  check_alias(af, bf, std::sqrt(psi_i.norm_squared() * psi_j.norm_squared()), g.periodic_q());
  // y = m dq; on a reciprocal grid e^{-i p_k y / hbar} = (-1)^m times a DFT twiddle.
  const auto t = offset_table(af, bf, n, g.periodic_q(), [](long m) { return (m % 2 == 0) ? 1.0 : -1.0; },
                              fourier::Direction::Forward);
  CrossWignerField w{g, std::vector<cplx>(n * n)};
  const double scale = g.dq() / (2.0 * kPi * g.hbar());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) w.values[j * n + k] = scale * t.at(j, k);
  return w;
}

WignerField wigner_from_position(const WaveFunction& psi) { return cross_wigner(psi, psi).real_part(); }

WignerField wigner_from_momentum(const MomentumWaveFunction& psi) { return cross_from_momentum(psi, psi).real_part(); }

std::vector<double> marginal_position(const WignerField& w) {
  const std::size_t np = w.grid.n_p();
  std::vector<double> out(w.grid.n_q());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = kernels::sum(std::span<const double>(w.values).subspan(j * np, np)) * w.grid.dp();
  return out;
}

std::vector<double> marginal_momentum(const WignerField& w) {
  const std::size_t np = w.grid.n_p();
  std::vector<double> out(np, 0.0);
  for (std::size_t j = 0; j < w.grid.n_q(); ++j)
    for (std::size_t k = 0; k < np; ++k) out[k] += w.values[j * np + k];
  for (auto& v : out) v *= w.grid.dq();
  return out;
}

std::vector<cplx> marginal_position(const CrossWignerField& w) {
  const std::size_t np = w.grid.n_p();
  std::vector<cplx> out(w.grid.n_q(), cplx(0.0, 0.0));
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t k = 0; k < np; ++k) out[j] += w.values[j * np + k];
    out[j] *= w.grid.dp();
  }
  return out;
}

double expectation(const WignerField& w, std::span<const double> symbol) {
  if (symbol.size() != w.values.size()) throw Error(ErrorCode::GridMismatch, "symbol is not sampled on the field grid");
  return kernels::dot(w.values, symbol) * w.grid.dq() * w.grid.dp();
}

double purity(const WignerField& w) { return kernels::dot(w.values, w.values) * w.grid.dq() * w.grid.dp(); }

}  // namespace phasespace
