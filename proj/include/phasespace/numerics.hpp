#pragma once

#include <cstddef>
#include <vector>

namespace phasespace::numerics {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for int e^{-x^2} f(x) dx (Golub-Welsch).
Quadrature gauss_hermite(std::size_t order);

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
Quadrature gauss_legendre(std::size_t order);

/// Orthonormal Hermite functions h_0 .. h_{count-1} at x for the length scale s:
/// h_n(x) = (pi s^2)^{-1/4} (2^n n!)^{-1/2} H_n(x / s) e^{-x^2 / (2 s^2)}.
/// Evaluated by the three-term recurrence, which stays finite for large n.
std::vector<double> hermite_functions(double x, std::size_t count, double scale);

/// ln n!
double log_factorial(std::size_t n);

double binomial(int n, int k);

}  // namespace phasespace::numerics
