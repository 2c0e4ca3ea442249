#pragma once

#include <complex>
#include <span>
#include <vector>

#include "phasespace/states.hpp"

namespace phasespace {

/// Real phase-space field. values[j * n_p + k] is the sample at (q_j, p_k).
struct WignerField {
  PhaseGrid grid;
  std::vector<double> values;

  double at(std::size_t j, std::size_t k) const { return values[j * grid.n_p() + k]; }
  double integral() const;
  double max_abs() const;
};

/// Complex field of an off-diagonal density term |psi_i><psi_j|, same layout.
struct CrossWignerField {
  PhaseGrid grid;
  std::vector<cplx> values;

  cplx at(std::size_t j, std::size_t k) const { return values[j * grid.n_p() + k]; }
  cplx integral() const;
  WignerField real_part() const;
  CrossWignerField conjugate() const;
};

/// W(q, p) = (2 pi hbar)^-1 int dy e^{-i p y / hbar} psi(q + y/2) psi*(q - y/2).
WignerField wigner_from_position(const WaveFunction& psi);

/// The same field from the momentum amplitude, with kernel e^{+i q u / hbar}.
WignerField wigner_from_momentum(const MomentumWaveFunction& psi);

/// Off-diagonal term with psi_i(q + y/2) psi_j*(q - y/2) in the integrand.
CrossWignerField cross_wigner(const WaveFunction& psi_i, const WaveFunction& psi_j);

std::vector<double> marginal_position(const WignerField& w);
std::vector<double> marginal_momentum(const WignerField& w);
std::vector<cplx> marginal_position(const CrossWignerField& w);

/// int dq dp A(q, p) W(q, p), with A sampled on W's grid in the same layout.
double expectation(const WignerField& w, std::span<const double> symbol);

/// int dq dp W^2, equal to 1 / (2 pi hbar) for pure states.
double purity(const WignerField& w);

/// Samples f(q, p) on the grid in field layout.
template <class F>
std::vector<double> sample_symbol(const PhaseGrid& g, F&& f) {
  std::vector<double> out(g.n_q() * g.n_p());
  for (std::size_t j = 0; j < g.n_q(); ++j)
    for (std::size_t k = 0; k < g.n_p(); ++k) out[j * g.n_p() + k] = f(g.q(j), g.p(k));
  return out;
}

}  // namespace phasespace
