#pragma once

#include <vector>

#include "phasespace/hamiltonian.hpp"
#include "phasespace/polynomial.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

/// Complex samples of a phase-space function on a grid, in field layout.
/// Construction checks that the outer spectral band next to Nyquist (0.5% of
/// the modes on each side of each axis) holds < 1e-8 of the energy.
class GridSymbol {
 public:
  GridSymbol(PhaseGrid grid, std::vector<cplx> values);

  template <class F>
  static GridSymbol sample(const PhaseGrid& g, F&& f) {
    std::vector<cplx> v(g.n_q() * g.n_p());
    for (std::size_t j = 0; j < g.n_q(); ++j)
      for (std::size_t k = 0; k < g.n_p(); ++k) v[j * g.n_p() + k] = f(g.q(j), g.p(k));
    return GridSymbol(g, std::move(v));
  }
  static GridSymbol from_field(const WignerField& w);
  static GridSymbol from_field(const CrossWignerField& w);

  const PhaseGrid& grid() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  cplx at(std::size_t j, std::size_t k) const { return values_[j * grid_.n_p() + k]; }

  /// Fraction of spectral energy in the outer band.
  static double outer_band_fraction(const PhaseGrid& g, const std::vector<cplx>& values);

 private:
  PhaseGrid grid_;
  std::vector<cplx> values_;
};

enum class Side { Left, Right };

/// Exact star product of polynomials via Bopp shifts:
/// A(q + i hbar/2 d_p, p - i hbar/2 d_q) acting on B, Weyl ordered.
PolySymbol star_poly(const PolySymbol& a, const PolySymbol& b, double hbar);
PolySymbol moyal_bracket(const PolySymbol& a, const PolySymbol& b, double hbar);
PolySymbol poisson_bracket(const PolySymbol& a, const PolySymbol& b);

/// Star product of band-limited grid symbols, evaluated as a twisted
/// convolution of the two spectra. Throws BandwidthExceeded when the product
/// spreads past Nyquist.
GridSymbol star_grid(const GridSymbol& a, const GridSymbol& b);
GridSymbol moyal_bracket(const GridSymbol& a, const GridSymbol& b);

/// H * W (Side::Left) or W * H (Side::Right) for a polynomial H and a field W.
/// The series ends at the degree of H, and W is only differentiated along axes
/// where the matching derivative of H is nonzero, so fields concentrated on
/// single momentum rows are fine as long as H does not depend on q.
CrossWignerField star_poly_grid(const PolySymbol& h, const CrossWignerField& w, Side side);

/// ||H * W - E W|| / ||W|| (or W * H on the right), discrete L2 norms.
double stargen_residual(const PolySymbol& h, const CrossWignerField& w, double energy, Side side);
double stargen_residual(const PolySymbol& h, const WignerField& w, double energy, Side side);

/// Kinetic-plus-potential symbol (p - charge A)^2 / 2m + charge phi as a polynomial.
PolySymbol hamiltonian_symbol(const HamiltonianSpec& h, double t = 0.0);

/// e(hbar) = ||[A, B]_M / (i hbar) - {A, B}|| in coefficient norm, per hbar.
std::vector<double> classical_limit_probe(const PolySymbol& a, const PolySymbol& b,
                                          const std::vector<double>& hbar_sequence);

struct EvolutionOptions {
  double dt = 1e-2;
  /// Skip the dt bound check (used only to demonstrate StabilityViolation).
  bool enforce_bound = true;
};

/// dt bound 0.1 min(dq m / p_max, hbar / max|charge phi|), with p_max the largest
/// |p| of any momentum row that carries weight.
double stability_bound(const CrossWignerField& w, const HamiltonianSpec& left, const HamiltonianSpec& right);

/// dW/dt = (H_left * W - W * H_right) / (i hbar), Strang split into a kinetic
/// step (exact in Fourier-in-q) and a potential step (exact in Fourier-in-p).
CrossWignerField evolve_wigner(const CrossWignerField& w0, const HamiltonianSpec& left, const HamiltonianSpec& right,
                               double t_final, const EvolutionOptions& opts);
CrossWignerField evolve_wigner(const CrossWignerField& w0, const HamiltonianSpec& h, double t_final,
                               const EvolutionOptions& opts);
WignerField evolve_wigner(const WignerField& w0, const HamiltonianSpec& h, double t_final, const EvolutionOptions& opts);

}  // namespace phasespace
