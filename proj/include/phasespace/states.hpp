#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "phasespace/hamiltonian.hpp"

namespace phasespace {

using cplx = std::complex<double>;

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = 1.0;
  double omega = 1.0;

  void validate() const;
};

/// Uniform (q, p) lattice. Sample j sits at q_min + j * dq with dq = (q_max - q_min) / n_q,
/// so q_max itself is the periodic image of q_min and is never sampled. The p axis
/// follows the same rule.
///
/// Fourier operations need a reciprocal grid: n_p == n_q, dp = 2 pi hbar / (n_q dq)
/// and p_min = -(n_q / 2) dp. The factories below always build one.
class PhaseGrid {
 public:
  PhaseGrid(double q_min, double q_max, std::size_t n_q, double p_min, double p_max, std::size_t n_p,
            bool periodic_q, double hbar);

  /// Line grid on [q_min, q_max) with the reciprocal momentum axis.
  static PhaseGrid line(double q_min, double q_max, std::size_t n, double hbar = 1.0);

  /// Ring of the given radius; the coordinate is arc length s in [0, 2 pi R).
  static PhaseGrid ring(double radius, std::size_t n, double hbar = 1.0);

  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  std::size_t n_q() const { return n_q_; }
  std::size_t n_p() const { return n_p_; }
  bool periodic_q() const { return periodic_q_; }
  double hbar() const { return hbar_; }

  double dq() const { return (q_max_ - q_min_) / static_cast<double>(n_q_); }
  double dp() const { return (p_max_ - p_min_) / static_cast<double>(n_p_); }
  double length() const { return q_max_ - q_min_; }
  double q(std::size_t j) const { return q_min_ + static_cast<double>(j) * dq(); }
  double p(std::size_t k) const { return p_min_ + static_cast<double>(k) * dp(); }
  std::vector<double> q_axis() const;
  std::vector<double> p_axis() const;

  /// Ring radius; only meaningful when periodic_q().
  double radius() const;

  bool is_reciprocal() const;
  void require_reciprocal() const;
  bool same_as(const PhaseGrid& other) const;

 private:
  double q_min_, q_max_;
  std::size_t n_q_;
  double p_min_, p_max_;
  std::size_t n_p_;
  bool periodic_q_;
  double hbar_;
};

struct WaveFunction {
  PhaseGrid grid;
  std::vector<cplx> values;

  double norm_squared() const;
  cplx inner(const WaveFunction& other) const;  // <this|other>
  void normalize();
};

struct MomentumWaveFunction {
  PhaseGrid grid;
  std::vector<cplx> values;

  double norm_squared() const;
};

/// Normalized Gaussian exp(-(q - center_q)^2 / (2 width^2) + i center_p q / hbar).
WaveFunction make_gaussian_packet(const PhaseGrid& grid, double center_q, double center_p, double width,
                                  const PhysicalConstants& consts);

/// exp(i k s) / sqrt(2 pi R) with k = index / R.
WaveFunction make_ring_mode(const PhaseGrid& grid, long index);

MomentumWaveFunction to_momentum(const WaveFunction& psi);
WaveFunction to_position(const MomentumWaveFunction& psi);

/// -i hbar d/dq evaluated spectrally.
WaveFunction apply_momentum(const WaveFunction& psi);
double expectation_position(const WaveFunction& psi);
double expectation_momentum(const WaveFunction& psi);

/// Split-step propagation of the Schroedinger equation with the given Hamiltonian
/// from t = 0 to t_final. dt is an upper bound; steps are shortened to land on
/// every potential switch time.
WaveFunction evolve_wavefunction(const WaveFunction& psi, const HamiltonianSpec& h, double t_final, double dt);

/// Largest boundary modulus of the normalized samples in position and momentum.
double boundary_tail(const WaveFunction& psi);

}  // namespace phasespace
