#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phasespace/error.hpp"
#include "phasespace/numerics.hpp"
#include "phasespace/weyl_oracle.hpp"

using namespace phasespace;
using Eigen::MatrixXcd;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

PolySymbol random_poly(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolySymbol s;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) s.add_term(a, b, cplx(u(rng), u(rng)));
  return s;
}

}  // namespace

TEST_CASE("position symbol maps to the ladder position matrix and back") {
  const std::size_t dim = 12;
  const auto qm = weyl_to_matrix(PolySymbol::q(), dim);
  CHECK(max_abs(qm.entries - position_matrix(dim).entries) < 1e-14);
  CHECK(distance(matrix_to_symbol(qm, 1), PolySymbol::q()) < 1e-13);
  CHECK(distance(matrix_to_symbol(momentum_matrix(dim), 1), PolySymbol::p()) < 1e-13);
}

TEST_CASE("unit symbol maps to the identity") {
  const auto one = weyl_to_matrix(PolySymbol::constant(1.0), 9);
  CHECK(max_abs(one.entries - MatrixXcd::Identity(9, 9)) == 0.0);
}

TEST_CASE("qp is symmetrized") {
  const std::size_t dim = 10;
  const double hbar = 0.8;
  const auto qp = weyl_to_matrix(PolySymbol::monomial(1, 1), dim, hbar);
  // Exact ladder products in a larger space, cropped.
  const auto q = position_matrix(dim + 2, hbar).entries;
  const auto p = momentum_matrix(dim + 2, hbar).entries;
  const MatrixXcd expect = (0.5 * (q * p + p * q)).topLeftCorner(dim, dim);
  CHECK(max_abs(qp.entries - expect) < 1e-14);
  // qp - (QP + PQ)/2 as ladder operators: i hbar / 2 (a^dagger^2 - a^2).
  MatrixXcd ladder = MatrixXcd::Zero(dim, dim);
  for (std::size_t n = 0; n + 2 < dim; ++n) {
    const double v = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    ladder(n + 2, n) = cplx(0.0, 0.5 * hbar) * v;
    ladder(n, n + 2) = cplx(0.0, -0.5 * hbar) * v;
  }
  CHECK(max_abs(qp.entries - ladder) < 1e-14);
}

TEST_CASE("symbol round trip through the matrix") {
  std::mt19937_64 rng(11);
  for (int degree = 0; degree <= 6; ++degree) {
    CAPTURE(degree);
    const PolySymbol a = random_poly(degree, rng);
    const auto m = weyl_to_matrix(a, 20, 0.7);
    CHECK(distance(matrix_to_symbol(m, degree), a) < 1e-10 * std::max(1.0, a.coefficient_norm()));
  }
}

TEST_CASE("truncation guard") {
  try {
    weyl_to_matrix(PolySymbol::monomial(2, 2), 5);
    FAIL("expected TruncationTooSevere");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooSevere);
  }
  CHECK(commutator_defect(16, 1) < 1e-14);
  CHECK(commutator_defect(16, 0) > 1.0);  // the last diagonal entry carries the truncation
}

TEST_CASE("sampled symbol of a projector follows the quadrature definition") {
  const double hbar = 1.0;
  const PhaseGrid g = PhaseGrid::line(-10.0, 10.0, 64, hbar);
  OperatorMatrix m{MatrixXcd::Zero(4, 4), hbar};
  m.entries(1, 0) = 1.0;  // |1><0|
  const auto samples = matrix_to_samples(m, g);
  // Direct trapezoid of int dy e^{-i p y} h_1(q + y/2) h_0(q - y/2).
  for (std::size_t j : {20u, 31u, 40u})
    for (std::size_t k : {25u, 32u, 37u}) {
      const double q = g.q(j), p = g.p(k);
      cplx acc(0.0, 0.0);
      const double dy = 0.01;
      for (int i = -2000; i <= 2000; ++i) {
        const double y = i * dy;
        const auto a = numerics::hermite_functions(q + 0.5 * y, 2, std::sqrt(hbar));
        const auto b = numerics::hermite_functions(q - 0.5 * y, 2, std::sqrt(hbar));
        acc += std::polar(1.0, -p * y / hbar) * a[1] * b[0] * dy;
      }
      CHECK(std::abs(samples[j * g.n_p() + k] - acc) < 1e-9);
    }
}

TEST_CASE("Gaussian symbols correspond to geometric number-basis operators") {
  const double hbar = 1.0;
  const PhaseGrid g = PhaseGrid::line(-12.0, 12.0, 96, hbar);
  for (double a : {1.0, 0.5}) {
    const double lambda = (1.0 - a) / (1.0 + a);
    const std::size_t dim = 80;
    OperatorMatrix m{MatrixXcd::Zero(dim, dim), hbar};
    for (std::size_t n = 0; n < dim; ++n) m.entries(n, n) = 0.5 * (1.0 + lambda) * std::pow(lambda, static_cast<double>(n));
    const auto samples = matrix_to_samples(m, g);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_q(); ++j)
      for (std::size_t k = 0; k < g.n_p(); ++k) {
        const double r2 = g.q(j) * g.q(j) + g.p(k) * g.p(k);
        if (r2 > 25.0) continue;  // interior only; the operator is truncated at n = dim
        err = std::max(err, std::abs(samples[j * g.n_p() + k] - std::exp(-a * r2 / hbar)));
      }
    CAPTURE(a);
    CHECK(err < 1e-10);
  }
  (void)kPi;
}
