#include "phasespace/bargmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "phasespace/error.hpp"
#include "phasespace/fourier.hpp"
#include "phasespace/numerics.hpp"

namespace phasespace {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kAdmission = 1e-8;
constexpr double kHermitianTolerance = 1e-10;
constexpr double kDivergenceRatio = 1e8;

// sqrt(n!) for n < size, finite up to n = 170.
std::vector<double> root_factorials(std::size_t size) {
  std::vector<double> r(size);
  for (std::size_t n = 0; n < size; ++n) r[n] = std::exp(0.5 * numerics::log_factorial(n));
  return r;
}

// Orthonormal amplitudes <n|psi> = sqrt(n!) c_n.
std::vector<cplx> amplitudes(const SBFunction& phi) {
  const auto r = root_factorials(phi.size());
  std::vector<cplx> a(phi.size());
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = r[n] * phi.coeffs[n];
  return a;
}

SBFunction from_amplitudes(const std::vector<cplx>& a) {
  const auto r = root_factorials(a.size());
  SBFunction phi{std::vector<cplx>(a.size())};
  for (std::size_t n = 0; n < a.size(); ++n) phi.coeffs[n] = a[n] / r[n];
  return phi;
}

// M_o = S M_c S^{-1} with S = diag(sqrt(n!)), and the inverse map.
MatrixXcd to_orthonormal(const MatrixXcd& m) {
  const auto r = root_factorials(static_cast<std::size_t>(m.rows()));
  MatrixXcd out = m;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) *= r[static_cast<std::size_t>(i)] / r[static_cast<std::size_t>(j)];
  return out;
}

MatrixXcd to_coefficients(const MatrixXcd& m) {
  const auto r = root_factorials(static_cast<std::size_t>(m.rows()));
  MatrixXcd out = m;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) *= r[static_cast<std::size_t>(j)] / r[static_cast<std::size_t>(i)];
  return out;
}

MatrixXcd ladder_down(std::size_t size) {
  const auto n = static_cast<Index>(size);
  MatrixXcd a = MatrixXcd::Zero(n, n);
  for (Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

void require_line(const PhaseGrid& grid) {
  if (grid.periodic_q()) throw Error(ErrorCode::InvalidArgument, "the Segal-Bargmann transform needs a line grid");
}

}  // namespace

void SbScaling::validate() const {
  if (!(hbar > 0.0) || !(mass > 0.0) || !(omega > 0.0))
    throw Error(ErrorCode::InvalidArgument, "hbar, mass and omega must be positive");
}

double SbScaling::length() const {
  validate();
  return std::sqrt(hbar / (mass * omega));
}

cplx SBFunction::operator()(cplx z) const {
  cplx acc(0.0, 0.0);
  for (std::size_t n = coeffs.size(); n-- > 0;) acc = acc * z + coeffs[n];
  return acc;
}

double SBFunction::norm_squared() const {
  double s = 0.0;
  for (const cplx& a : amplitudes(*this)) s += std::norm(a);
  return s;
}

double SBFunction::tail_share() const {
  const auto a = amplitudes(*this);
  double total = 0.0, tail = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    total += std::norm(a[n]);
    if (n + kGuardBand >= a.size()) tail += std::norm(a[n]);
  }
  return total > 0.0 ? tail / total : 0.0;
}

void SBFunction::require_admitted() const {
  if (tail_share() > kAdmission)
    throw Error(ErrorCode::TruncationOverflow, "coefficient tail exceeds the guard-band budget");
}

SBFunction sb_transform(const WaveFunction& psi, const SbScaling& units, std::size_t size) {
  require_line(psi.grid);
  if (size <= kGuardBand) throw Error(ErrorCode::InvalidArgument, "truncation must exceed the guard band");
  const double length = units.length();
  const PhaseGrid& g = psi.grid;
  std::vector<cplx> a(size, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < g.n_q(); ++j) {
    const auto h = numerics::hermite_functions(g.q(j), size, length);
    const cplx v = psi.values[j] * g.dq();
    for (std::size_t n = 0; n < size; ++n) a[n] += h[n] * v;
  }
  SBFunction phi = from_amplitudes(a);
  const double expected = psi.norm_squared();
  double kept = 0.0;
  for (const cplx& v : a) kept += std::norm(v);
  if (expected > 0.0 && std::abs(kept - expected) > kAdmission * expected)
    throw Error(ErrorCode::TruncationOverflow, "state has weight beyond the retained coefficients");
  phi.require_admitted();
  return phi;
}

WaveFunction sb_inverse(const SBFunction& phi, const PhaseGrid& grid, const SbScaling& units) {
  require_line(grid);
  const double length = units.length();
  const auto a = amplitudes(phi);
  WaveFunction psi{grid, std::vector<cplx>(grid.n_q(), cplx(0.0, 0.0))};
  for (std::size_t j = 0; j < grid.n_q(); ++j) {
    const auto h = numerics::hermite_functions(grid.q(j), a.size(), length);
    cplx acc(0.0, 0.0);
    for (std::size_t n = 0; n < a.size(); ++n) acc += a[n] * h[n];
    psi.values[j] = acc;
  }
  return psi;
}

WaveFunction sb_inverse_contour(const SBFunction& phi, const PhaseGrid& grid, const SbScaling& units) {
  require_line(grid);
  const double length = units.length();
  // Exact for the truncated polynomial: degree size - 1 needs size / 2 nodes.
  const auto rule = numerics::gauss_hermite(phi.size() / 2 + 8);
  const double prefactor = std::pow(kPi, -0.25) / std::sqrt(2.0 * kPi) / std::sqrt(length);
  WaveFunction psi{grid, std::vector<cplx>(grid.n_q(), cplx(0.0, 0.0))};
  double peak = 0.0, spread = 0.0;
  for (std::size_t j = 0; j < grid.n_q(); ++j) {
    const double x = grid.q(j) / length;
    const double envelope = prefactor * std::exp(-0.5 * x * x);
    cplx acc(0.0, 0.0);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      // e^{-y^2/2} dy = sqrt2 e^{-u^2} du with y = sqrt2 u.
      const cplx v = kSqrt2 * rule.weights[i] * phi(cplx(kSqrt2 * x, kSqrt2 * rule.nodes[i]));
      acc += v;
      magnitude += std::abs(v);
    }
    psi.values[j] = envelope * acc;
    peak = std::max(peak, std::abs(psi.values[j]));
    spread = std::max(spread, envelope * magnitude);
  }
  if (spread > kDivergenceRatio * std::max(peak, std::numeric_limits<double>::min()))
    throw Error(ErrorCode::QuadratureDivergence, "phi grows faster along the contour than the Gaussian weight decays");
  return psi;
}

cplx sb_inner(const SBFunction& f, const SBFunction& g) {
  const std::size_t n = std::min(f.size(), g.size());
  const auto r = root_factorials(n);
  cplx acc(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) acc += r[k] * r[k] * std::conj(f.coeffs[k]) * g.coeffs[k];
  return acc;
}

SBFunction sb_apply(SbOperator op, const SBFunction& phi, Truncation mode) {
  const std::size_t size = phi.size();
  std::vector<cplx> down(size, cplx(0.0, 0.0)), up(size, cplx(0.0, 0.0));
  for (std::size_t n = 0; n + 1 < size; ++n) down[n] = static_cast<double>(n + 1) * phi.coeffs[n + 1];
  for (std::size_t n = 1; n < size; ++n) up[n] = phi.coeffs[n - 1];
  // z c_{N-1} z^{N-1} lands on z^N, which is not stored.
  const cplx spilled = size > 0 ? phi.coeffs[size - 1] : cplx(0.0, 0.0);

  SBFunction out{std::vector<cplx>(size)};
  cplx spill_weight(0.0, 0.0);
  const cplx i(0.0, 1.0);
  for (std::size_t n = 0; n < size; ++n) {
    switch (op) {
      case SbOperator::Annihilate: out.coeffs[n] = down[n]; break;
      case SbOperator::Create: out.coeffs[n] = up[n]; break;
      case SbOperator::Position: out.coeffs[n] = (up[n] + down[n]) / kSqrt2; break;
      case SbOperator::Momentum: out.coeffs[n] = i * (up[n] - down[n]) / kSqrt2; break;
    }
  }
  switch (op) {
    case SbOperator::Annihilate: break;
    case SbOperator::Create: spill_weight = spilled; break;
    case SbOperator::Position: spill_weight = spilled / kSqrt2; break;
    case SbOperator::Momentum: spill_weight = i * spilled / kSqrt2; break;
  }
  if (mode == Truncation::Strict && op != SbOperator::Annihilate && size > 0) {
    // Weight of the lost coefficient in the SB norm: N! |c_N|^2.
    const double lost = std::exp(numerics::log_factorial(size)) * std::norm(spill_weight);
    const double kept = out.norm_squared();
    const double total = kept + lost;
    if (total > 0.0 && (lost + out.tail_share() * kept) / total > kAdmission)
      throw Error(ErrorCode::TruncationOverflow, "operator pushes weight past the retained coefficients");
  }
  return out;
}

OperatorMatrix sb_operator_matrix(SbOperator op, std::size_t size) {
  const MatrixXcd a = ladder_down(size);
  const cplx i(0.0, 1.0);
  MatrixXcd m;
  switch (op) {
    case SbOperator::Annihilate: m = a; break;
    case SbOperator::Create: m = a.adjoint(); break;
    case SbOperator::Position: m = (a + a.adjoint()) / kSqrt2; break;
    case SbOperator::Momentum: m = i * (MatrixXcd(a.adjoint()) - a) / kSqrt2; break;
  }
  return {to_coefficients(m), 1.0};
}

OperatorMatrix sb_oscillator(const SbScaling& units, std::size_t size) {
  units.validate();
  MatrixXcd m = MatrixXcd::Zero(static_cast<Index>(size), static_cast<Index>(size));
  for (std::size_t n = 0; n < size; ++n)
    m(static_cast<Index>(n), static_cast<Index>(n)) = units.hbar * units.omega * (static_cast<double>(n) + 0.5);
  return {m, units.hbar};
}

OperatorMatrix sb_hamiltonian(const HamiltonianSpec& h, const SbScaling& units, std::size_t size, double t) {
  h.validate();
  const double length = units.length();
  const auto n = static_cast<Index>(size);
  const MatrixXcd a = ladder_down(size);
  const MatrixXcd ad = a.adjoint();
  const MatrixXcd identity = MatrixXcd::Identity(n, n);
  const MatrixXcd kinetic_momentum =
      cplx(0.0, units.momentum_unit() / kSqrt2) * (ad - a) - h.charge * h.vector_potential * identity;
  MatrixXcd ho = kinetic_momentum * kinetic_momentum / (2.0 * h.mass) + h.charge * h.phi_at(t) * identity;
  if (h.has_static_potential()) {
    // V(Q) through the eigenbasis of the truncated (real symmetric) position matrix.
    const Eigen::MatrixXd position = (length / kSqrt2) * (a + ad).real();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(position);
    Eigen::VectorXd v(n);
    for (Index k = 0; k < n; ++k) v(k) = h.static_potential(eig.eigenvalues()(k));
    const Eigen::MatrixXd vq = eig.eigenvectors() * v.asDiagonal() * eig.eigenvectors().transpose();
    ho += vq.cast<cplx>();
  }
  return {to_coefficients(ho), units.hbar};
}

SbPropagator::SbPropagator(const OperatorMatrix& h) : hbar_(h.hbar) {
  const MatrixXcd ho = to_orthonormal(h.entries);
  const double scale = std::max(1.0, ho.cwiseAbs().maxCoeff());
  if ((ho - ho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale)
    throw Error(ErrorCode::NonHermitian, "Hamiltonian is not self-adjoint under the SB inner product");
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (ho + ho.adjoint()));
  modes_ = eig.eigenvectors();
  energies_ = eig.eigenvalues();
}

SBFunction SbPropagator::advance(const SBFunction& phi, double t) const {
  if (static_cast<Index>(phi.size()) != modes_.rows())
    throw Error(ErrorCode::GridMismatch, "Hamiltonian and state have different truncations");
  if (t == 0.0) return phi;
  const auto a0 = amplitudes(phi);
  const VectorXcd start = Eigen::Map<const VectorXcd>(a0.data(), static_cast<Index>(a0.size()));
  VectorXcd modal = modes_.adjoint() * start;
  for (Index k = 0; k < modal.size(); ++k) modal(k) *= std::polar(1.0, -energies_(k) * t / hbar_);
  const VectorXcd end = modes_ * modal;
  return from_amplitudes(std::vector<cplx>(end.data(), end.data() + end.size()));
}

SBFunction sb_evolve(const SBFunction& phi, const OperatorMatrix& h, double t) {
  if (h.dim() != phi.size()) throw Error(ErrorCode::GridMismatch, "Hamiltonian and state have different truncations");
  return SbPropagator(h).advance(phi, t);
}

std::vector<double> harmonic_spectrum(std::size_t size, double omega) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "spectrum size must be positive");
  const OperatorMatrix h = sb_oscillator(SbScaling{1.0, 1.0, omega}, size);
  std::vector<double> e(size);
  for (std::size_t n = 0; n < size; ++n) e[n] = h.entries(static_cast<Index>(n), static_cast<Index>(n)).real();
  return e;
}

SBFunction sb_plane_wave(double wavenumber, std::size_t size) {
  // phi' = (z + i sqrt2 k) phi gives (n + 1) c_{n+1} = c_{n-1} + i sqrt2 k c_n.
  SBFunction phi{std::vector<cplx>(size, cplx(0.0, 0.0))};
  if (size == 0) return phi;
  phi.coeffs[0] = 1.0;
  const cplx slope(0.0, kSqrt2 * wavenumber);
  for (std::size_t n = 0; n + 1 < size; ++n) {
    const cplx prev = n > 0 ? phi.coeffs[n - 1] : cplx(0.0, 0.0);
    phi.coeffs[n + 1] = (prev + slope * phi.coeffs[n]) / static_cast<double>(n + 1);
  }
  return phi;
}

PlaneGrid PlaneGrid::uniform(double re_min, double re_max, std::size_t n_re, double im_min, double im_max,
                             std::size_t n_im) {
  if (n_re < 2 || n_im < 2 || !(re_max > re_min) || !(im_max > im_min))
    throw Error(ErrorCode::InvalidArgument, "plane grid needs at least two nodes per axis and a positive extent");
  return {re_min, (re_max - re_min) / static_cast<double>(n_re - 1), n_re,
          im_min, (im_max - im_min) / static_cast<double>(n_im - 1), n_im};
}

PlaneGrid PlaneGrid::matching(const PhaseGrid& grid, const SbScaling& units) {
  const double length = units.length();
  const double pu = units.momentum_unit();
  return {grid.q_min() / (length * kSqrt2), grid.dq() / (length * kSqrt2), grid.n_q(),
          -grid.p(grid.n_p() - 1) / (pu * kSqrt2), grid.dp() / (pu * kSqrt2), grid.n_p()};
}

bool PlaneGrid::same_as(const PlaneGrid& o) const {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };
  return n_re == o.n_re && n_im == o.n_im && close(re_min, o.re_min) && close(re_step, o.re_step) &&
         close(im_min, o.im_min) && close(im_step, o.im_step);
}

double HusimiField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.re_step * grid.im_step;
}

double HusimiField::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
double HusimiField::min() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }

double husimi_bound() { return kHusimiMeasureWeight / (2.0 * kPi); }

HusimiField husimi_from_sb(const SBFunction& phi, const PlaneGrid& plane) {
  HusimiField h{plane, std::vector<double>(plane.n_re * plane.n_im)};
  const double scale = kHusimiMeasureWeight / (2.0 * kPi);
  for (std::size_t i = 0; i < plane.n_re; ++i)
    for (std::size_t k = 0; k < plane.n_im; ++k) {
      const cplx z = plane.z(i, k);
      h.values[i * plane.n_im + k] = scale * std::exp(-std::norm(z)) * std::norm(phi(z));
    }
  return h;
}

HusimiField husimi_from_wigner(const WignerField& w, const PlaneGrid& plane, const SbScaling& units) {
  const PhaseGrid& g = w.grid;
  g.require_reciprocal();
  if (!plane.same_as(PlaneGrid::matching(g, units)))
    throw Error(ErrorCode::GridMismatch, "plane grid does not match the Wigner grid");
  const std::size_t nq = g.n_q(), np = g.n_p();
  // Dimensionless density: W dq dp = W' dx dp'.
  std::vector<cplx> hat(nq * np);
  for (std::size_t i = 0; i < hat.size(); ++i) hat[i] = cplx(w.values[i] * units.hbar, 0.0);
  fourier::fft2(hat, nq, np, fourier::Direction::Forward);
  const auto kx = fourier::angular_frequencies(nq, g.dq() / units.length());
  const auto kp = fourier::angular_frequencies(np, g.dp() / units.momentum_unit());
  // pi^{-1} e^{-u^2 - v^2} has transform e^{-(kx^2 + kp^2) / 4}.
  for (std::size_t j = 0; j < nq; ++j)
    for (std::size_t k = 0; k < np; ++k) hat[j * np + k] *= std::exp(-0.25 * (kx[j] * kx[j] + kp[k] * kp[k]));
  fourier::fft2(hat, nq, np, fourier::Direction::Backward);
  const double norm = kHusimiMeasureWeight / static_cast<double>(nq * np);
  HusimiField h{plane, std::vector<double>(nq * np)};
  // im z runs opposite to p.
  for (std::size_t j = 0; j < nq; ++j)
    for (std::size_t k = 0; k < np; ++k) h.values[j * np + k] = norm * hat[j * np + (np - 1 - k)].real();
  return h;
}

double husimi_mean_position(const HusimiField& h, const SbScaling& units) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.grid.n_re; ++i)
    for (std::size_t k = 0; k < h.grid.n_im; ++k) s += h.at(i, k) * h.grid.re(i);
  return kSqrt2 * units.length() * s * h.grid.re_step * h.grid.im_step;
}

double husimi_mean_momentum(const HusimiField& h, const SbScaling& units) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.grid.n_re; ++i)
    for (std::size_t k = 0; k < h.grid.n_im; ++k) s += h.at(i, k) * h.grid.im(k);
  return -kSqrt2 * units.momentum_unit() * s * h.grid.re_step * h.grid.im_step;
}

}  // namespace phasespace
