#include "phasespace/aharonov_bohm.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "phasespace/error.hpp"
#include "phasespace/fourier.hpp"
#include "phasespace/numerics.hpp"

namespace phasespace {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample_times(double tau, const Sampling& s) {
  if (s.samples_per_tau == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample per tau");
  if (!(s.run_past_tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "run_past_tau must be non-negative");
  const double step = tau / static_cast<double>(s.samples_per_tau);
  const auto count =
      static_cast<std::size_t>(std::floor((1.0 + s.run_past_tau) * static_cast<double>(s.samples_per_tau) + 1e-9)) + 1;
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) t[k] = static_cast<double>(k) * step;
  t[s.samples_per_tau] = tau;
  return t;
}

bool keep_frame(const Sampling& s, std::size_t k) { return s.frame_stride > 0 && k % s.frame_stride == 0; }

// Evolution options that satisfy the stability bound of every listed field.
EvolutionOptions safe_options(std::initializer_list<const CrossWignerField*> fields, const HamiltonianSpec& left,
                              const HamiltonianSpec& right) {
  double bound = std::numeric_limits<double>::infinity();
  for (const CrossWignerField* w : fields) bound = std::min(bound, stability_bound(*w, left, right));
  return {std::isfinite(bound) ? 0.5 * bound : 1.0, true};
}

CrossWignerField as_cross(const WignerField& w) { return {w.grid, std::vector<cplx>(w.values.begin(), w.values.end())}; }

cplx field_integral(const CrossWignerField& w) { return w.integral(); }

// Any admission failure of a backend becomes FormalismMismatch.
template <class F>
auto admitted(Formalism f, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::AliasingDetected:
      case ErrorCode::GridTooSmall:
      case ErrorCode::TruncationOverflow:
      case ErrorCode::StabilityViolation:
        throw Error(ErrorCode::FormalismMismatch,
                    "state is not admitted by the " + to_string(f) + " backend: " + std::string(e.what()));
      default: throw;
    }
  }
}

void finish(ScenarioResult& r, std::size_t tau_index) {
  r.probability_at_tau = r.probability[tau_index];
  r.extracted_phase = r.phase.back();
}

}  // namespace

std::string to_string(Formalism f) { return f == Formalism::Wigner ? "wigner" : "segal-bargmann"; }

double wrap_phase(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

void ElectricScenario::validate() const {
  consts.validate();
  if (!(tau > 0.0)) throw Error(ErrorCode::ValidationError, "tau must be positive");
  if (!(energy >= 0.0)) throw Error(ErrorCode::ValidationError, "energy must be non-negative");
  if (!(packet_width > 0.0)) throw Error(ErrorCode::ValidationError, "packet width must be positive");
  if (!(box_half_width > 0.0)) throw Error(ErrorCode::ValidationError, "box half width must be positive");
  if (grid_points < 8 || grid_points % 2 != 0) throw Error(ErrorCode::ValidationError, "grid points must be even and >= 8");
  if (sb_truncation < 2 * kGuardBand) throw Error(ErrorCode::ValidationError, "SB truncation is too small");
  if (!std::isfinite(phi_1) || !std::isfinite(phi_2)) throw Error(ErrorCode::ValidationError, "potentials must be finite");
}

double ElectricScenario::initial_momentum() const { return std::sqrt(2.0 * consts.mass * energy); }

HamiltonianSpec ElectricScenario::branch_hamiltonian(int branch) const {
  HamiltonianSpec h = HamiltonianSpec::free_particle(consts.mass);
  h.charge = consts.charge;
  const double phi = branch == 1 ? phi_1 : (branch == 2 ? phi_2 : 0.0);
  if (branch == 1 || branch == 2) h.scalar_potential = {{0.0, phi}, {tau, 0.0}};
  return h;
}

PhaseGrid ElectricScenario::grid() const { return PhaseGrid::line(-box_half_width, box_half_width, grid_points, consts.hbar); }

WaveFunction ElectricScenario::initial_state() const {
  return make_gaussian_packet(grid(), packet_center, initial_momentum(), packet_width, consts);
}

ElectricScenario ElectricScenario::destructive(double energy, double charge) {
  ElectricScenario s;
  s.energy = energy;
  s.consts.charge = charge;
  s.phi_1 = energy / (2.0 * charge);
  s.phi_2 = 0.0;
  s.tau = 2.0 * kPi / energy;
  return s;
}

void MagneticScenario::validate() const {
  consts.validate();
  if (!(solenoid_radius > 0.0)) throw Error(ErrorCode::ValidationError, "solenoid radius must be positive");
  if (!(ring_radius > solenoid_radius)) throw Error(ErrorCode::ValidationError, "ring radius must exceed solenoid radius");
  if (!(tau > 0.0)) throw Error(ErrorCode::ValidationError, "tau must be positive");
  if (!std::isfinite(field) || !std::isfinite(momentum)) throw Error(ErrorCode::ValidationError, "field and momentum must be finite");
  if (grid_points < 8 || grid_points % 2 != 0) throw Error(ErrorCode::ValidationError, "grid points must be even and >= 8");
}

double MagneticScenario::vector_potential() const {
  return solenoid_radius * solenoid_radius * field / (2.0 * ring_radius);
}

long MagneticScenario::mode_index() const {
  const double index = momentum * ring_radius / consts.hbar;
  const double nearest = std::round(index);
  if (std::abs(index - nearest) > 1e-9 * std::max(1.0, std::abs(index)))
    throw Error(ErrorCode::IncommensurateMomentum, "p0 R / hbar must be an integer on the ring");
  return static_cast<long>(nearest);
}

double MagneticScenario::energy() const { return momentum * momentum / (2.0 * consts.mass); }

HamiltonianSpec MagneticScenario::ring_hamiltonian(bool solenoid_on) const {
  HamiltonianSpec h = HamiltonianSpec::free_particle(consts.mass);
  h.charge = consts.charge;
  h.vector_potential = solenoid_on ? vector_potential() : 0.0;
  return h;
}

PhaseGrid MagneticScenario::grid() const { return PhaseGrid::ring(ring_radius, grid_points, consts.hbar); }

MagneticScenario MagneticScenario::destructive(double ring_radius, long index, double solenoid_radius, double charge) {
  MagneticScenario s;
  s.ring_radius = ring_radius;
  s.solenoid_radius = solenoid_radius;
  s.consts.charge = charge;
  s.momentum = static_cast<double>(index) * s.consts.hbar / ring_radius;
  const double a = s.momentum / (16.0 * charge);
  s.field = 2.0 * ring_radius * a / (solenoid_radius * solenoid_radius);
  s.tau = 4.0 * kPi / s.energy();
  return s;
}

double electric_phase_closed_form(const ElectricScenario& scn, double t) {
  return scn.consts.charge * scn.delta_phi() * std::min(std::max(t, 0.0), scn.tau) / scn.consts.hbar;
}

double electric_ab_closed_form(const ElectricScenario& scn, double t) {
  return 0.5 * (1.0 + std::cos(electric_phase_closed_form(scn, t)));
}

double magnetic_phase_closed_form(const MagneticScenario& scn) {
  const double delta_e = 2.0 * scn.momentum * scn.consts.charge * scn.vector_potential() / scn.consts.mass;
  return wrap_phase(delta_e * scn.tau / scn.consts.hbar);
}

namespace {

ScenarioResult electric_wigner(const ElectricScenario& scn, const Sampling& sampling) {
  const auto times = sample_times(scn.tau, sampling);
  const HamiltonianSpec h1 = scn.branch_hamiltonian(1), h2 = scn.branch_hamiltonian(2), free = scn.branch_hamiltonian(0);
  const WaveFunction psi0 = scn.initial_state();
  const WignerField w0 = wigner_from_position(psi0);
  const CrossWignerField diag0 = as_cross(w0);
  // |branch_2><branch_1|: its integral is <branch_1|branch_2>.
  const CrossWignerField cross0 = cross_wigner(psi0, psi0);
  const EvolutionOptions opts = safe_options({&cross0, &diag0}, h2, h1);

  ScenarioResult r;
  r.formalism = Formalism::Wigner;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const auto w11 = evolve_wigner(diag0, h1, t, opts);
    const auto w22 = evolve_wigner(diag0, h2, t, opts);
    const auto wf = evolve_wigner(diag0, free, t, opts);
    const auto c = evolve_wigner(cross0, h2, h1, t, opts);
    const cplx overlap = field_integral(c);
    const double reference = 4.0 * field_integral(wf).real();
    r.times.push_back(t);
    r.probability.push_back((field_integral(w11).real() + field_integral(w22).real() + 2.0 * overlap.real()) / reference);
    r.phase.push_back(wrap_phase(std::arg(overlap)));
    if (keep_frame(sampling, k)) {
      const auto m11 = marginal_position(w11.real_part()), m22 = marginal_position(w22.real_part());
      const auto mc = marginal_position(c);
      Frame f{k, t, c.grid.q_axis(), {}, {}};
      for (std::size_t j = 0; j < mc.size(); ++j) {
        f.density.push_back(0.25 * (m11[j] + m22[j] + 2.0 * mc[j].real()));
        f.phase.push_back(std::arg(mc[j]));
      }
      r.frames.push_back(std::move(f));
    }
  }
  r.closed_form_phase = wrap_phase(electric_phase_closed_form(scn, times.back()));
  finish(r, sampling.samples_per_tau);
  return r;
}

SbScaling electric_units(const ElectricScenario& scn) {
  return {scn.consts.hbar, scn.consts.mass, scn.consts.hbar / (scn.consts.mass * scn.packet_width * scn.packet_width)};
}

// Propagation under a Hamiltonian that is constant on [0, tau) and on [tau, inf).
struct SbBranch {
  SbPropagator on, off;
  double tau;

  SbBranch(const HamiltonianSpec& h, const SbScaling& units, std::size_t size, double tau)
      : on(sb_hamiltonian(h, units, size, 0.0)), off(sb_hamiltonian(h, units, size, tau)), tau(tau) {}

  SBFunction at(const SBFunction& phi0, double t) const {
    if (t <= tau) return on.advance(phi0, t);
    return off.advance(on.advance(phi0, tau), t - tau);
  }
};

ScenarioResult electric_sb(const ElectricScenario& scn, const Sampling& sampling) {
  const auto times = sample_times(scn.tau, sampling);
  const SbScaling units = electric_units(scn);
  const std::size_t size = scn.sb_truncation;
  const SBFunction phi0 = sb_transform(scn.initial_state(), units, size);
  const SbBranch h1(scn.branch_hamiltonian(1), units, size, scn.tau);
  const SbBranch h2(scn.branch_hamiltonian(2), units, size, scn.tau);
  const SbBranch free(scn.branch_hamiltonian(0), units, size, scn.tau);

  ScenarioResult r;
  r.formalism = Formalism::SegalBargmann;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const SBFunction b1 = h1.at(phi0, t), b2 = h2.at(phi0, t), bf = free.at(phi0, t);
    b1.require_admitted();
    b2.require_admitted();
    const cplx overlap = sb_inner(b1, b2);
    r.times.push_back(t);
    r.probability.push_back((b1.norm_squared() + b2.norm_squared() + 2.0 * overlap.real()) / (4.0 * bf.norm_squared()));
    r.phase.push_back(wrap_phase(std::arg(overlap)));
    if (keep_frame(sampling, k)) {
      SBFunction mixed{std::vector<cplx>(b1.size())};
      for (std::size_t n = 0; n < mixed.size(); ++n) mixed.coeffs[n] = 0.5 * (b1.coeffs[n] + b2.coeffs[n]);
      const WaveFunction psi = sb_inverse(mixed, scn.grid(), units);
      Frame f{k, t, psi.grid.q_axis(), {}, {}};
      for (const cplx& v : psi.values) {
        f.density.push_back(std::norm(v));
        f.phase.push_back(std::arg(v));
      }
      r.frames.push_back(std::move(f));
    }
  }
  r.closed_form_phase = wrap_phase(electric_phase_closed_form(scn, times.back()));
  finish(r, sampling.samples_per_tau);
  return r;
}

}  // namespace

ScenarioResult simulate_electric_ab(const ElectricScenario& scn, Formalism formalism, const Sampling& sampling) {
  scn.validate();
  return admitted(formalism, [&] {
    return formalism == Formalism::Wigner ? electric_wigner(scn, sampling) : electric_sb(scn, sampling);
  });
}

namespace {

struct RingFields {
  CrossWignerField plus, minus, cross;

  static RingFields build(const MagneticScenario& scn) {
    const long index = scn.mode_index();
    const PhaseGrid g = scn.grid();
    const auto a = make_ring_mode(g, index), b = make_ring_mode(g, -index);
    return {as_cross(wigner_from_position(a)), as_cross(wigner_from_position(b)), cross_wigner(a, b)};
  }

  EvolutionOptions options(const HamiltonianSpec& h) const { return safe_options({&plus, &minus, &cross}, h, h); }
};

// Field after the solenoid has been on for min(t, tau).
CrossWignerField ring_evolve(const CrossWignerField& w0, const HamiltonianSpec& on, const HamiltonianSpec& off,
                             const EvolutionOptions& opts, double tau, double t) {
  const double t_on = std::min(t, tau);
  auto w = evolve_wigner(w0, on, t_on, opts);
  return t > t_on ? evolve_wigner(w, off, t - t_on, opts) : w;
}

ScenarioResult magnetic_wigner(const MagneticScenario& scn, const Sampling& sampling) {
  const RingFields fields = RingFields::build(scn);
  const HamiltonianSpec on = scn.ring_hamiltonian(true), off = scn.ring_hamiltonian(false);
  const EvolutionOptions opts = fields.options(on);
  const EvolutionOptions ref_opts = fields.options(off);
  const auto times = sample_times(scn.tau, sampling);
  const auto q_axis = scn.grid().q_axis();

  ScenarioResult r;
  r.formalism = Formalism::Wigner;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const auto mp = marginal_position(ring_evolve(fields.plus, on, off, opts, scn.tau, t));
    const auto mm = marginal_position(ring_evolve(fields.minus, on, off, opts, scn.tau, t));
    const auto mc = marginal_position(ring_evolve(fields.cross, on, off, opts, scn.tau, t));
    const cplx ref_c = marginal_position(ring_evolve(fields.cross, off, off, ref_opts, scn.tau, t))[0];
    const double ref_p = marginal_position(ring_evolve(fields.plus, off, off, ref_opts, scn.tau, t))[0].real();
    const double ref_m = marginal_position(ring_evolve(fields.minus, off, off, ref_opts, scn.tau, t))[0].real();
    r.times.push_back(t);
    // Everything is read at s = 0, the first ring sample.
    r.probability.push_back((mp[0].real() + mm[0].real() + 2.0 * mc[0].real()) / (ref_p + ref_m + 2.0 * ref_c.real()));
    r.phase.push_back(wrap_phase(std::arg(mc[0]) - std::arg(ref_c)));
    if (keep_frame(sampling, k)) {
      Frame f{k, t, q_axis, {}, {}};
      for (std::size_t j = 0; j < mc.size(); ++j) {
        f.density.push_back(0.25 * (mp[j].real() + mm[j].real() + 2.0 * mc[j].real()));
        f.phase.push_back(std::arg(mc[j]));
      }
      r.frames.push_back(std::move(f));
    }
  }
  r.closed_form_phase = magnetic_phase_closed_form(scn);
  finish(r, sampling.samples_per_tau);
  return r;
}

// Eigenvalue of the truncated momentum matrix on a plane-wave image, from the
// rows that the truncation does not touch.
double sb_momentum_eigenvalue(const SBFunction& phi, const SbScaling& units) {
  const SBFunction moved = sb_apply(SbOperator::Momentum, phi, Truncation::Drop);
  const std::size_t rows = phi.size() - 2;
  cplx num = 0.0;
  double den = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < rows; ++n) {
    num += std::conj(phi.coeffs[n]) * moved.coeffs[n];
    den += std::norm(phi.coeffs[n]);
    scale = std::max(scale, std::abs(phi.coeffs[n]));
  }
  const cplx kappa = num / den;
  for (std::size_t n = 0; n < rows; ++n)
    if (std::abs(moved.coeffs[n] - kappa * phi.coeffs[n]) > 1e-10 * std::max(1.0, std::abs(kappa)) * scale)
      throw Error(ErrorCode::FormalismMismatch, "plane-wave image is not a momentum eigenfunction");
  return kappa.real() * units.momentum_unit();
}

ScenarioResult magnetic_sb(const MagneticScenario& scn, const Sampling& sampling) {
  const long index = scn.mode_index();
  // Length unit R: the ring wavenumber is the mode index.
  const SbScaling units{scn.consts.hbar, scn.consts.mass,
                        scn.consts.hbar / (scn.consts.mass * scn.ring_radius * scn.ring_radius)};
  const double k = static_cast<double>(index);
  const SBFunction plus = sb_plane_wave(k), minus = sb_plane_wave(-k);
  const double p_plus = sb_momentum_eigenvalue(plus, units), p_minus = sb_momentum_eigenvalue(minus, units);
  const HamiltonianSpec on = scn.ring_hamiltonian(true), off = scn.ring_hamiltonian(false);
  const double hbar = scn.consts.hbar;
  auto angle = [&](double p, double t) {
    const double t_on = std::min(t, scn.tau);
    return -(on.kinetic(p) * t_on + off.kinetic(p) * (t - t_on)) / hbar;
  };
  const auto times = sample_times(scn.tau, sampling);
  const PhaseGrid g = scn.grid();
  const double amp = 1.0 / std::sqrt(2.0 * kPi * scn.ring_radius);

  ScenarioResult r;
  r.formalism = Formalism::SegalBargmann;
  for (std::size_t step = 0; step < times.size(); ++step) {
    const double t = times[step];
    // Both images equal 1 at z = 0, the point over s = 0.
    const cplx vp = std::polar(1.0, angle(p_plus, t)) * plus(0.0);
    const cplx vm = std::polar(1.0, angle(p_minus, t)) * minus(0.0);
    const cplx rp = std::polar(1.0, -off.kinetic(p_plus) * t / hbar) * plus(0.0);
    const cplx rm = std::polar(1.0, -off.kinetic(p_minus) * t / hbar) * minus(0.0);
    r.times.push_back(t);
    r.probability.push_back(std::norm(vp + vm) / std::norm(rp + rm));
    r.phase.push_back(wrap_phase(std::arg(std::conj(vm) * vp) - std::arg(std::conj(rm) * rp)));
    if (keep_frame(sampling, step)) {
      Frame f{step, t, g.q_axis(), {}, {}};
      for (double s : f.q) {
        const cplx psi = 0.5 * amp * (vp * std::polar(1.0, k * s / scn.ring_radius) +
                                      vm * std::polar(1.0, -k * s / scn.ring_radius));
        f.density.push_back(std::norm(psi));
        f.phase.push_back(std::arg(psi));
      }
      r.frames.push_back(std::move(f));
    }
  }
  r.closed_form_phase = magnetic_phase_closed_form(scn);
  finish(r, sampling.samples_per_tau);
  return r;
}

}  // namespace

ScenarioResult simulate_magnetic_ring(const MagneticScenario& scn, Formalism formalism, const Sampling& sampling) {
  scn.validate();
  scn.mode_index();
  return admitted(formalism, [&] {
    return formalism == Formalism::Wigner ? magnetic_wigner(scn, sampling) : magnetic_sb(scn, sampling);
  });
}

void GaugeWorldline::validate() const {
  if (x.size() < 2 || x.size() != t.size())
    throw Error(ErrorCode::InvalidArgument, "worldline needs at least two (x, t) points of equal count");
  if (!vector_potential || !scalar_potential) throw Error(ErrorCode::InvalidArgument, "worldline potentials are missing");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(t[i])) throw Error(ErrorCode::InvalidArgument, "worldline points must be finite");
}

double gauge_phase(const GaugeWorldline& w, double hbar) {
  w.validate();
  double spatial = 0.0, temporal = 0.0;
  for (std::size_t i = 0; i + 1 < w.x.size(); ++i) {
    spatial += 0.5 * (w.vector_potential(w.x[i]) + w.vector_potential(w.x[i + 1])) * (w.x[i + 1] - w.x[i]);
    temporal += 0.5 * (w.scalar_potential(w.t[i]) + w.scalar_potential(w.t[i + 1])) * (w.t[i + 1] - w.t[i]);
  }
  return w.charge * (spatial - temporal) / hbar;
}

namespace {

using PhaseFn = std::function<double(double)>;

double line_integral(const std::function<double(double)>& f, double a, double b) {
  static const numerics::Quadrature rule = numerics::gauss_legendre(48);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double time_part(const GaugeWorldline& w) {
  double temporal = 0.0;
  for (std::size_t i = 0; i + 1 < w.t.size(); ++i)
    temporal += 0.5 * (w.scalar_potential(w.t[i]) + w.scalar_potential(w.t[i + 1])) * (w.t[i + 1] - w.t[i]);
  return temporal;
}

// theta(x) of a worldline; on a ring the loop integral must be a whole turn.
PhaseFn worldline_phase(const GaugeWorldline& w, const PhaseGrid& grid, double hbar) {
  w.validate();
  const double x0 = w.x.front();
  const double offset = w.charge * time_part(w) / hbar;
  if (grid.periodic_q()) {
    const double loop = w.charge * line_integral(w.vector_potential, x0, x0 + grid.length()) / hbar;
    if (std::abs(wrap_phase(loop)) > 1e-9)
      throw Error(ErrorCode::InvalidArgument, "phase factor is not single-valued on the ring");
  }
  return [w, x0, offset, hbar](double x) { return w.charge * line_integral(w.vector_potential, x0, x) / hbar - offset; };
}

WaveFunction multiply_phase(const WaveFunction& psi, const PhaseFn& theta) {
  WaveFunction out = psi;
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] *= std::polar(1.0, theta(psi.grid.q(j)));
  return out;
}

// Row-wise transform to the (q, offset) representation and back. Offset m is
// signed, y = m dq.
template <class Op>
CrossWignerField in_offset_representation(const CrossWignerField& w, Op&& op) {
  const PhaseGrid& g = w.grid;
  g.require_reciprocal();
  const std::size_t n = g.n_p();
  CrossWignerField out = w;
  std::vector<cplx> row(n);
  for (std::size_t j = 0; j < g.n_q(); ++j) {
    std::copy_n(w.values.begin() + static_cast<std::ptrdiff_t>(j * n), n, row.begin());
    fourier::fft(row, fourier::Direction::Backward);
    for (std::size_t m = 0; m < n; ++m) {
      const long signed_m = m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
      row[m] *= op(g.q(j), static_cast<double>(signed_m) * g.dq()) / static_cast<double>(n);
    }
    fourier::fft(row, fourier::Direction::Forward);
    std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::ptrdiff_t>(j * n));
  }
  return out;
}

CrossWignerField conjugate_by_phase(const CrossWignerField& w, const PhaseFn& theta) {
  return in_offset_representation(
      w, [&](double q, double y) { return std::polar(1.0, theta(q + 0.5 * y) - theta(q - 0.5 * y)); });
}

double l2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double l2_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

// Symmetric position matrix (a + a^dagger) / sqrt2 on orthonormal amplitudes.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> position_eigensystem(std::size_t size) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  for (std::size_t n = 0; n + 1 < size; ++n) {
    const double v = std::sqrt(0.5 * static_cast<double>(n + 1));
    x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n + 1)) = v;
    x(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n)) = v;
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x);
}

Eigen::VectorXcd to_amplitudes(const SBFunction& phi) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(phi.size()));
  double log_fact = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    a(static_cast<Eigen::Index>(n)) = phi.coeffs[n] * std::exp(0.5 * log_fact);
  }
  return a;
}

SBFunction from_amplitudes(const Eigen::VectorXcd& a) {
  SBFunction phi{std::vector<cplx>(static_cast<std::size_t>(a.size()))};
  double log_fact = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    phi.coeffs[n] = a(static_cast<Eigen::Index>(n)) * std::exp(-0.5 * log_fact);
  }
  return phi;
}

// f(Q) on orthonormal amplitudes, Q in physical units.
Eigen::VectorXcd position_function(const Eigen::VectorXcd& a, const std::function<cplx(double)>& f, double length) {
  const auto es = position_eigensystem(static_cast<std::size_t>(a.size()));
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::VectorXcd proj = v.transpose() * a;
  for (Eigen::Index i = 0; i < proj.size(); ++i) proj(i) *= f(length * es.eigenvalues()(i));
  return v * proj;
}

}  // namespace

double local_gauge_phase(const GaugeWorldline& w, double x, double hbar) {
  w.validate();
  return w.charge * (line_integral(w.vector_potential, w.x.front(), x) - time_part(w)) / hbar;
}

WaveFunction apply_phase_operator(const WaveFunction& psi, const GaugeWorldline& w) {
  return multiply_phase(psi, worldline_phase(w, psi.grid, psi.grid.hbar()));
}

SBFunction apply_phase_operator(const SBFunction& phi, const GaugeWorldline& w, const SbScaling& units) {
  units.validate();
  w.validate();
  const double hbar = units.hbar;
  auto factor = [&](double x) { return std::polar(1.0, local_gauge_phase(w, x, hbar)); };
  return from_amplitudes(position_function(to_amplitudes(phi), factor, units.length()));
}

CrossWignerField apply_phase_operator(const CrossWignerField& w, const GaugeWorldline& g) {
  return conjugate_by_phase(w, worldline_phase(g, w.grid, w.grid.hbar()));
}

WignerField apply_phase_operator(const WignerField&, const GaugeWorldline&) {
  throw Error(ErrorCode::UnsupportedState,
              "a diagonal Wigner function carries no phase; apply the operator to the state or a cross field");
}

double intertwining_residual(const WaveFunction& psi, const GaugeWorldline& w) {
  const WaveFunction moved = apply_phase_operator(psi, w);
  WaveFunction lhs = apply_momentum(moved);
  for (std::size_t j = 0; j < lhs.values.size(); ++j)
    lhs.values[j] -= w.charge * w.vector_potential(psi.grid.q(j)) * moved.values[j];
  const WaveFunction p_psi = apply_momentum(psi);
  const WaveFunction rhs = apply_phase_operator(p_psi, w);
  return l2_diff(lhs.values, rhs.values) / l2(p_psi.values);
}

double intertwining_residual(const SBFunction& phi, const GaugeWorldline& w, const SbScaling& units) {
  const SBFunction moved = apply_phase_operator(phi, w, units);
  const double p_unit = units.momentum_unit();
  const SBFunction p_moved = sb_apply(SbOperator::Momentum, moved, Truncation::Drop);
  const Eigen::VectorXcd a_moved = position_function(
      to_amplitudes(moved), [&](double x) { return cplx(w.charge * w.vector_potential(x), 0.0); }, units.length());
  const Eigen::VectorXcd lhs = p_unit * to_amplitudes(p_moved) - a_moved;
  const SBFunction p_phi = sb_apply(SbOperator::Momentum, phi, Truncation::Drop);
  const Eigen::VectorXcd rhs = p_unit * to_amplitudes(apply_phase_operator(p_phi, w, units));
  // The top rows feel the truncation; compare on the lower half.
  const Eigen::Index kept = lhs.size() / 2;
  const Eigen::VectorXcd scale = p_unit * to_amplitudes(p_phi);
  return (lhs.head(kept) - rhs.head(kept)).norm() / scale.norm();
}

double intertwining_residual(const CrossWignerField& field, const GaugeWorldline& w) {
  const PolySymbol p = PolySymbol::p();
  const PhaseFn theta = worldline_phase(w, field.grid, field.grid.hbar());
  const CrossWignerField moved = conjugate_by_phase(field, theta);
  CrossWignerField lhs = star_poly_grid(p, moved, Side::Left);
  const CrossWignerField a_moved = in_offset_representation(
      moved, [&](double q, double y) { return cplx(w.charge * w.vector_potential(q + 0.5 * y), 0.0); });
  for (std::size_t i = 0; i < lhs.values.size(); ++i) lhs.values[i] -= a_moved.values[i];
  const CrossWignerField p_field = star_poly_grid(p, field, Side::Left);
  const CrossWignerField rhs = conjugate_by_phase(p_field, theta);
  return l2_diff(lhs.values, rhs.values) / l2(p_field.values);
}

namespace {

// e^{i charge Lambda(x, t) / hbar} at a fixed time.
PhaseFn gauge_phase_at(const GaugeFunction& lambda, double t, double charge, double hbar) {
  return [&lambda, t, charge, hbar](double x) { return charge * lambda.value(x, t) / hbar; };
}

void require_gauge(const GaugeFunction& lambda) {
  if (!lambda.value || !lambda.d_x || !lambda.d_t) throw Error(ErrorCode::InvalidArgument, "gauge function is incomplete");
}

}  // namespace

double gauge_transform_check(const ElectricScenario& scn, const GaugeFunction& lambda, const Sampling& sampling) {
  scn.validate();
  require_gauge(lambda);
  const auto times = sample_times(scn.tau, sampling);
  const HamiltonianSpec h1 = scn.branch_hamiltonian(1), h2 = scn.branch_hamiltonian(2), free = scn.branch_hamiltonian(0);
  const WaveFunction psi0 = scn.initial_state();
  const CrossWignerField diag0 = as_cross(wigner_from_position(psi0));
  const CrossWignerField cross0 = cross_wigner(psi0, psi0);
  const EvolutionOptions opts = safe_options({&cross0, &diag0}, h2, h1);
  const double charge = scn.consts.charge, hbar = scn.consts.hbar;

  double worst = 0.0;
  for (double t : times) {
    const auto w11 = evolve_wigner(diag0, h1, t, opts), w22 = evolve_wigner(diag0, h2, t, opts);
    const auto wf = evolve_wigner(diag0, free, t, opts);
    const auto c = evolve_wigner(cross0, h2, h1, t, opts);
    auto ratio = [](const CrossWignerField& a, const CrossWignerField& b, const CrossWignerField& x,
                    const CrossWignerField& f) {
      return (a.integral().real() + b.integral().real() + 2.0 * x.integral().real()) / (4.0 * f.integral().real());
    };
    const PhaseFn theta = gauge_phase_at(lambda, t, charge, hbar);
    const double before = ratio(w11, w22, c, wf);
    const double after = ratio(conjugate_by_phase(w11, theta), conjugate_by_phase(w22, theta),
                               conjugate_by_phase(c, theta), conjugate_by_phase(wf, theta));
    worst = std::max(worst, std::abs(after - before));
  }
  return worst;
}

double gauge_transform_check(const MagneticScenario& scn, const GaugeFunction& lambda, const Sampling& sampling) {
  scn.validate();
  require_gauge(lambda);
  const RingFields fields = RingFields::build(scn);
  const PhaseGrid g = scn.grid();
  const HamiltonianSpec on = scn.ring_hamiltonian(true), off = scn.ring_hamiltonian(false);
  const EvolutionOptions opts = fields.options(on);
  const double charge = scn.consts.charge, hbar = scn.consts.hbar;
  const double loop = charge * (lambda.value(g.length(), 0.0) - lambda.value(0.0, 0.0)) / hbar;
  if (std::abs(wrap_phase(loop)) > 1e-9) throw Error(ErrorCode::InvalidArgument, "gauge function is not single-valued on the ring");

  double worst = 0.0;
  for (double t : sample_times(scn.tau, sampling)) {
    const auto ep = ring_evolve(fields.plus, on, off, opts, scn.tau, t);
    const auto em = ring_evolve(fields.minus, on, off, opts, scn.tau, t);
    const auto ec = ring_evolve(fields.cross, on, off, opts, scn.tau, t);
    auto density = [](const CrossWignerField& a, const CrossWignerField& b, const CrossWignerField& x) {
      return marginal_position(a)[0].real() + marginal_position(b)[0].real() + 2.0 * marginal_position(x)[0].real();
    };
    const PhaseFn theta = gauge_phase_at(lambda, t, charge, hbar);
    const double before = density(ep, em, ec);
    const double after = density(conjugate_by_phase(ep, theta), conjugate_by_phase(em, theta), conjugate_by_phase(ec, theta));
    const double scale = 2.0 * (marginal_position(ep)[0].real() + marginal_position(em)[0].real());
    worst = std::max(worst, std::abs(after - before) / scale);
  }
  return worst;
}

double gauge_equation_residual(const ElectricScenario& scn, const GaugeFunction& lambda, double t) {
  scn.validate();
  require_gauge(lambda);
  constexpr double kStep = 1e-4;
  if (!(t > kStep) || std::abs(t - scn.tau) < 2.0 * kStep)
    throw Error(ErrorCode::InvalidArgument, "residual time must be away from t = 0 and the switch time");
  const HamiltonianSpec h = scn.branch_hamiltonian(1);
  const double charge = scn.consts.charge, hbar = scn.consts.hbar, mass = scn.consts.mass;
  const WaveFunction psi0 = scn.initial_state();
  auto mapped = [&](double at) {
    const WaveFunction psi = evolve_wavefunction(psi0, h, at, at);
    return multiply_phase(psi, gauge_phase_at(lambda, at, charge, hbar));
  };
  const WaveFunction now = mapped(t), ahead = mapped(t + kStep), behind = mapped(t - kStep);
  const PhaseGrid& g = now.grid;

  // (P - charge A') applied to a state, A' = d_x Lambda (the original A is zero).
  auto kinetic_momentum = [&](const WaveFunction& f) {
    WaveFunction out = apply_momentum(f);
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= charge * lambda.d_x(g.q(j), t) * f.values[j];
    return out;
  };
  const WaveFunction twice = kinetic_momentum(kinetic_momentum(now));
  std::vector<cplx> lhs(now.values.size()), rhs(now.values.size());
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    lhs[j] = cplx(0.0, hbar) * (ahead.values[j] - behind.values[j]) / (2.0 * kStep);
    const double potential = charge * (h.phi_at(t) - lambda.d_t(g.q(j), t));
    rhs[j] = twice.values[j] / (2.0 * mass) + potential * now.values[j];
  }
  return l2_diff(lhs, rhs) / l2(rhs);
}

}  // namespace phasespace
