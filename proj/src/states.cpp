#include "phasespace/states.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/fourier.hpp"
#include "phasespace/kernels.hpp"

namespace phasespace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailLimit = 1e-8;

bool even_and_at_least_two(std::size_t n) { return n >= 2 && n % 2 == 0; }

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

// e^{-i p_k q_min / hbar}, the phase that moves the transform origin to q_min.
std::vector<cplx> origin_phase(const PhaseGrid& g) {
  std::vector<cplx> ph(g.n_p());
  for (std::size_t k = 0; k < g.n_p(); ++k) ph[k] = std::polar(1.0, -g.p(k) * g.q_min() / g.hbar());
  return ph;
}

void alternate_sign(std::vector<cplx>& v) {
  for (std::size_t j = 1; j < v.size(); j += 2) v[j] = -v[j];
}

}  // namespace

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  if (!std::isfinite(charge)) throw Error(ErrorCode::InvalidArgument, "charge must be finite");
}

PhaseGrid::PhaseGrid(double q_min, double q_max, std::size_t n_q, double p_min, double p_max, std::size_t n_p,
                     bool periodic_q, double hbar)
    : q_min_(q_min), q_max_(q_max), n_q_(n_q), p_min_(p_min), p_max_(p_max), n_p_(n_p), periodic_q_(periodic_q),
      hbar_(hbar) {
  if (!even_and_at_least_two(n_q) || !even_and_at_least_two(n_p))
    throw Error(ErrorCode::InvalidArgument, "grid sizes must be even and at least 2");
  if (!(q_max > q_min) || !(p_max > p_min)) throw Error(ErrorCode::InvalidArgument, "grid bounds must be increasing");
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  if (periodic_q && !close(q_min, 0.0)) throw Error(ErrorCode::InvalidArgument, "ring coordinate must start at 0");
}

PhaseGrid PhaseGrid::line(double q_min, double q_max, std::size_t n, double hbar) {
  if (!(q_max > q_min) || !(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "invalid line grid");
  const double dp = 2.0 * kPi * hbar / (q_max - q_min);
  const double half = static_cast<double>(n / 2);
  return PhaseGrid(q_min, q_max, n, -half * dp, half * dp, n, false, hbar);
}

PhaseGrid PhaseGrid::ring(double radius, std::size_t n, double hbar) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "ring radius must be positive");
  const double dp = hbar / radius;
  const double half = static_cast<double>(n / 2);
  return PhaseGrid(0.0, 2.0 * kPi * radius, n, -half * dp, half * dp, n, true, hbar);
}

std::vector<double> PhaseGrid::q_axis() const {
  std::vector<double> out(n_q_);
  for (std::size_t j = 0; j < n_q_; ++j) out[j] = q(j);
  return out;
}

std::vector<double> PhaseGrid::p_axis() const {
  std::vector<double> out(n_p_);
  for (std::size_t k = 0; k < n_p_; ++k) out[k] = p(k);
  return out;
}

double PhaseGrid::radius() const {
  if (!periodic_q_) throw Error(ErrorCode::NotPeriodic, "grid is not a ring");
  return length() / (2.0 * kPi);
}

bool PhaseGrid::is_reciprocal() const {
  return n_p_ == n_q_ && close(dp() * length(), 2.0 * kPi * hbar_) &&
         close(p_min_, -static_cast<double>(n_q_ / 2) * dp());
}

void PhaseGrid::require_reciprocal() const {
  if (!is_reciprocal())
    throw Error(ErrorCode::GridMismatch, "momentum axis is not reciprocal to the position axis");
}

bool PhaseGrid::same_as(const PhaseGrid& o) const {
  return n_q_ == o.n_q_ && n_p_ == o.n_p_ && periodic_q_ == o.periodic_q_ && close(q_min_, o.q_min_) &&
         close(q_max_, o.q_max_) && close(p_min_, o.p_min_) && close(p_max_, o.p_max_) && close(hbar_, o.hbar_);
}

double WaveFunction::norm_squared() const { return kernels::norm2(values) * grid.dq(); }

cplx WaveFunction::inner(const WaveFunction& other) const {
  if (!grid.same_as(other.grid)) throw Error(ErrorCode::GridMismatch, "inner product across different grids");
  return kernels::cdot(values, other.values) * grid.dq();
}

void WaveFunction::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero state");
  kernels::cscale(values, 1.0 / std::sqrt(n2));
}

double MomentumWaveFunction::norm_squared() const { return kernels::norm2(values) * grid.dp(); }

WaveFunction make_gaussian_packet(const PhaseGrid& grid, double center_q, double center_p, double width,
                                  const PhysicalConstants& consts) {
  consts.validate();
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "packet width must be positive");
  if (!close(consts.hbar, grid.hbar())) throw Error(ErrorCode::GridMismatch, "grid and constants disagree on hbar");
  // Sampling cannot see a carrier past Nyquist, so check the momentum band analytically.
  const double headroom = std::min(grid.p_max() - center_p, center_p - grid.p_min()) * width / consts.hbar;
  if (!(headroom > 0.0) || std::exp(-0.5 * headroom * headroom) > kTailLimit)
    throw Error(ErrorCode::GridTooSmall, "packet momentum does not fit the grid's momentum range");
  WaveFunction psi{grid, std::vector<cplx>(grid.n_q())};
  for (std::size_t j = 0; j < grid.n_q(); ++j) {
    const double q = grid.q(j);
    const double x = (q - center_q) / width;
    psi.values[j] = std::polar(std::exp(-0.5 * x * x), center_p * q / consts.hbar);
  }
  psi.normalize();
  if (boundary_tail(psi) > kTailLimit)
    throw Error(ErrorCode::GridTooSmall, "packet tails exceed 1e-8 at the grid boundary");
  return psi;
}

WaveFunction make_ring_mode(const PhaseGrid& grid, long index) {
  if (!grid.periodic_q()) throw Error(ErrorCode::NotPeriodic, "ring mode needs a periodic grid");
  if (2 * std::abs(index) >= static_cast<long>(grid.n_q()))
    throw Error(ErrorCode::GridTooSmall, "ring mode index is beyond the grid's Nyquist limit");
  const double r = grid.radius();
  const double k = static_cast<double>(index) / r;
  const double amp = 1.0 / std::sqrt(2.0 * kPi * r);
  WaveFunction psi{grid, std::vector<cplx>(grid.n_q())};
  for (std::size_t j = 0; j < grid.n_q(); ++j) psi.values[j] = std::polar(amp, k * grid.q(j));
  return psi;
}

MomentumWaveFunction to_momentum(const WaveFunction& psi) {
  const PhaseGrid& g = psi.grid;
  g.require_reciprocal();
  std::vector<cplx> v = psi.values;
  alternate_sign(v);
  fourier::fft(v, fourier::Direction::Forward);
  kernels::cmul(v, origin_phase(g));
  kernels::cscale(v, g.dq() / std::sqrt(2.0 * kPi * g.hbar()));
  return {g, std::move(v)};
}

WaveFunction to_position(const MomentumWaveFunction& psi) {
  const PhaseGrid& g = psi.grid;
  g.require_reciprocal();
  std::vector<cplx> v = psi.values;
  kernels::cmul_conj(v, origin_phase(g));
  fourier::fft(v, fourier::Direction::Backward);
  alternate_sign(v);
  kernels::cscale(v, g.dp() / std::sqrt(2.0 * kPi * g.hbar()));
  return {g, std::move(v)};
}

WaveFunction apply_momentum(const WaveFunction& psi) {
  MomentumWaveFunction m = to_momentum(psi);
  for (std::size_t k = 0; k < m.values.size(); ++k) m.values[k] *= m.grid.p(k);
  return to_position(m);
}

double expectation_position(const WaveFunction& psi) {
  double acc = 0.0;
  for (std::size_t j = 0; j < psi.values.size(); ++j) acc += psi.grid.q(j) * std::norm(psi.values[j]);
  return acc * psi.grid.dq() / psi.norm_squared();
}

double expectation_momentum(const WaveFunction& psi) {
  return psi.inner(apply_momentum(psi)).real() / psi.norm_squared();
}

WaveFunction evolve_wavefunction(const WaveFunction& psi, const HamiltonianSpec& h, double t_final, double dt) {
  h.validate();
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "invalid time span or step");
  const PhaseGrid& g = psi.grid;
  const double hbar = g.hbar();
  MomentumWaveFunction m = to_momentum(psi);

  auto kinetic = [&](double tau) {
    for (std::size_t k = 0; k < m.values.size(); ++k) m.values[k] *= std::polar(1.0, -h.kinetic(g.p(k)) * tau / hbar);
  };

  std::vector<double> cuts = h.switch_times(0.0, t_final);
  cuts.push_back(t_final);
  double t0 = 0.0;
  for (double t1 : cuts) {
    const double span = t1 - t0;
    if (span <= 0.0) continue;
    if (!h.has_static_potential()) {
      // Uniform potential: the two factors commute, so the segment is exact.
      kinetic(span);
      const cplx phase = std::polar(1.0, -h.potential(0.0, t0) * span / hbar);
      for (auto& v : m.values) v *= phase;
    } else {
      const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-12));
      const double tau = span / static_cast<double>(steps);
      std::vector<cplx> half(g.n_q());
      for (std::size_t j = 0; j < g.n_q(); ++j) half[j] = std::polar(1.0, -0.5 * h.potential(g.q(j), t0) * tau / hbar);
      WaveFunction w = to_position(m);
      for (std::size_t s = 0; s < steps; ++s) {
        kernels::cmul(w.values, half);
        m = to_momentum(w);
        kinetic(tau);
        w = to_position(m);
        kernels::cmul(w.values, half);
      }
      m = to_momentum(w);
    }
    t0 = t1;
  }
  return to_position(m);
}

double boundary_tail(const WaveFunction& psi) {
  const double scale = 1.0 / std::sqrt(psi.norm_squared());
  double tail = std::max(std::abs(psi.values.front()), std::abs(psi.values.back())) * scale;
  if (psi.grid.is_reciprocal()) {
    const MomentumWaveFunction m = to_momentum(psi);
    tail = std::max(tail, std::max(std::abs(m.values.front()), std::abs(m.values.back())) * scale);
  }
  return tail;
}

}  // namespace phasespace
