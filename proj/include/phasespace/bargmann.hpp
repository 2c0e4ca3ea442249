#pragma once

// Segal-Bargmann (holomorphic) representation with t = 1. Coefficients are
// dimensionless: positions are measured in units of length() and momenta in
// units of hbar / length(), so the oscillator ground state maps to phi = 1.

#include <complex>
#include <cstddef>
#include <vector>

#include "phasespace/hamiltonian.hpp"
#include "phasespace/states.hpp"
#include "phasespace/weyl_oracle.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

inline constexpr std::size_t kDefaultTruncation = 64;
inline constexpr std::size_t kGuardBand = 4;

/// Unit system at the module boundary: length sqrt(hbar / (m omega)).
struct SbScaling {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;

  void validate() const;
  double length() const;
  double momentum_unit() const { return hbar / length(); }
};

/// phi(z) = sum c_n z^n. The SB norm is sum n! |c_n|^2.
struct SBFunction {
  std::vector<cplx> coeffs;

  std::size_t size() const { return coeffs.size(); }
  cplx operator()(cplx z) const;
  double norm_squared() const;
  /// Share of the norm carried by the last kGuardBand coefficients.
  double tail_share() const;
  /// Throws TruncationOverflow when tail_share() > 1e-8.
  void require_admitted() const;
};

/// Coefficients <n|psi> / sqrt(n!) by trapezoid quadrature of the Hermite
/// functions against the samples. Throws TruncationOverflow when the guard band
/// holds more than 1e-8 of the norm or the kept norm falls short by more than
/// 1e-8.
SBFunction sb_transform(const WaveFunction& psi, const SbScaling& units, std::size_t size = kDefaultTruncation);

/// Hermite expansion sum c_n sqrt(n!) h_n(q) on the grid.
WaveFunction sb_inverse(const SBFunction& phi, const PhaseGrid& grid, const SbScaling& units);

/// psi(q) = pi^{-1/4} (2 pi)^{-1/2} e^{-q^2/2} int e^{-y^2/2} phi(sqrt2 q + i y) dy
/// with Gauss-Hermite nodes in y. Throws QuadratureDivergence when the
/// integrand magnitudes exceed the result by more than 1e8 (phi grows too fast
/// along the vertical lines for the weight to control it).
WaveFunction sb_inverse_contour(const SBFunction& phi, const PhaseGrid& grid, const SbScaling& units);

/// sum n! conj(f_n) g_n; the shorter vector is padded with zeros.
cplx sb_inner(const SBFunction& f, const SBFunction& g);

enum class SbOperator { Annihilate, Create, Position, Momentum };

/// Strict throws TruncationOverflow when the result is not admitted; Drop
/// discards whatever falls off the top of the coefficient vector.
enum class Truncation { Strict, Drop };

SBFunction sb_apply(SbOperator op, const SBFunction& phi, Truncation mode = Truncation::Strict);

/// Matrix of the (dimensionless) operator on the coefficient vector.
OperatorMatrix sb_operator_matrix(SbOperator op, std::size_t size);

/// hbar omega (z d/dz + 1/2), diagonal on monomials.
OperatorMatrix sb_oscillator(const SbScaling& units, std::size_t size);

/// (P - charge A)^2 / 2m + charge phi(t) + V(Q) on the coefficient vector.
/// P^2 is the product of truncated matrices; V(Q) is applied through the
/// eigenbasis of the truncated position matrix.
OperatorMatrix sb_hamiltonian(const HamiltonianSpec& h, const SbScaling& units, std::size_t size, double t = 0.0);

/// phi(t) = exp(-i H t / hbar) phi(0) through the eigenbasis of H. Throws
/// NonHermitian when H is not self-adjoint under sb_inner.
SBFunction sb_evolve(const SBFunction& phi, const OperatorMatrix& h, double t);

/// sb_evolve with the eigenbasis kept, for many times under one Hamiltonian.
class SbPropagator {
 public:
  explicit SbPropagator(const OperatorMatrix& h);
  SBFunction advance(const SBFunction& phi, double t) const;

 private:
  double hbar_ = 1.0;
  Eigen::MatrixXcd modes_;
  Eigen::VectorXd energies_;
};

/// Diagonal of sb_oscillator in units of omega: E_n = omega (n + 1/2).
std::vector<double> harmonic_spectrum(std::size_t size, double omega = 1.0);

/// Image exp(z^2 / 2 + i sqrt2 k z) of the plane wave e^{i k q} (dimensionless
/// k), truncated. Not normalizable, so never admitted; used for ring modes.
SBFunction sb_plane_wave(double wavenumber, std::size_t size = kDefaultTruncation);

/// Uniform nodes over the complex plane; values are stored re-major.
struct PlaneGrid {
  double re_min = 0.0;
  double re_step = 1.0;
  std::size_t n_re = 1;
  double im_min = 0.0;
  double im_step = 1.0;
  std::size_t n_im = 1;

  static PlaneGrid uniform(double re_min, double re_max, std::size_t n_re, double im_min, double im_max,
                           std::size_t n_im);
  /// Nodes z = (q - i p) / sqrt2 (dimensionless) of a phase grid, with the
  /// imaginary axis running opposite to p.
  static PlaneGrid matching(const PhaseGrid& grid, const SbScaling& units);

  double re(std::size_t i) const { return re_min + static_cast<double>(i) * re_step; }
  double im(std::size_t k) const { return im_min + static_cast<double>(k) * im_step; }
  cplx z(std::size_t i, std::size_t k) const { return {re(i), im(k)}; }
  bool same_as(const PlaneGrid& o) const;
};

/// Ratio between the normalized Husimi function and the bare
/// e^{-|z|^2} |phi|^2 / (2 pi): with d^2z = d(re z) d(im z) the ground state
/// integrates to 1/2, so every field is scaled by 2.
inline constexpr double kHusimiMeasureWeight = 2.0;

struct HusimiField {
  PlaneGrid grid;
  std::vector<double> values;

  double at(std::size_t i, std::size_t k) const { return values[i * grid.n_im + k]; }
  double integral() const;
  double max() const;
  double min() const;
};

/// Upper bound of any normalized Husimi field: weight / (2 pi).
double husimi_bound();

HusimiField husimi_from_sb(const SBFunction& phi, const PlaneGrid& plane);

/// Gaussian smoothing of W by FFT multiplication. The plane must be
/// PlaneGrid::matching(W.grid, units), otherwise GridMismatch.
HusimiField husimi_from_wigner(const WignerField& w, const PlaneGrid& plane, const SbScaling& units);

/// Antinormal-rule expectations in physical units: q = sqrt2 length re z,
/// p = -sqrt2 (hbar / length) im z.
double husimi_mean_position(const HusimiField& h, const SbScaling& units);
double husimi_mean_momentum(const HusimiField& h, const SbScaling& units);

}  // namespace phasespace
