#pragma once

// Independent operator-side reference: symbols are mapped to matrices in the
// harmonic-oscillator number basis (m omega = 1) and back.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "phasespace/polynomial.hpp"
#include "phasespace/states.hpp"

namespace phasespace {

struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  double hbar = 1.0;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
  OperatorMatrix operator*(const OperatorMatrix& o) const { return {entries * o.entries, hbar}; }
};

/// sqrt(hbar / 2) (a + a^dagger), exact on the first dim - 1 rows and columns.
OperatorMatrix position_matrix(std::size_t dim, double hbar = 1.0);

/// i sqrt(hbar / 2) (a^dagger - a).
OperatorMatrix momentum_matrix(std::size_t dim, double hbar = 1.0);

/// Weyl-ordered operator: each monomial q^a p^b becomes the average of all
/// distinct words with a factors of Q and b of P. Built in dimension dim + degree
/// and cropped, so every kept entry is exact.
OperatorMatrix weyl_to_matrix(const PolySymbol& symbol, std::size_t dim, double hbar = 1.0);

/// Weyl symbol of an operator known to be a polynomial of at most the given degree.
/// Reads the normal-ordered coefficients from the leading (degree + 1) block and
/// removes the Gaussian smoothing that separates normal and Weyl order.
PolySymbol matrix_to_symbol(const OperatorMatrix& m, int degree);

/// Weyl symbol samples int dy e^{-i p y / hbar} <q + y/2|M|q - y/2> on a line grid,
/// using Hermite functions for the kernel. Layout matches WignerField.
std::vector<cplx> matrix_to_samples(const OperatorMatrix& m, const PhaseGrid& grid);

/// Largest deviation of [Q, P] from i hbar on the leading (dim - guard) block.
double commutator_defect(std::size_t dim, std::size_t guard, double hbar = 1.0);

}  // namespace phasespace
