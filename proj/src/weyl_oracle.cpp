#include "phasespace/weyl_oracle.hpp"

#include <cmath>

#include "phasespace/error.hpp"
#include "phasespace/fourier.hpp"
#include "phasespace/numerics.hpp"

namespace phasespace {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;

constexpr double kCommutatorTolerance = 1e-8;

MatrixXcd lowering(std::size_t dim) {
  MatrixXcd a = MatrixXcd::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t n = 1; n < dim; ++n) a(static_cast<Index>(n - 1), static_cast<Index>(n)) = std::sqrt(static_cast<double>(n));
  return a;
}

PolySymbol power(const PolySymbol& base, int k) {
  PolySymbol out = PolySymbol::constant(1.0);
  for (int i = 0; i < k; ++i) out = out * base;
  return out;
}

// exp(-hbar/4 (d_q^2 + d_p^2)) applied to a polynomial; the series terminates.
PolySymbol unsmooth(const PolySymbol& s, double hbar) {
  PolySymbol out = s;
  PolySymbol term = s;
  const int max_k = (s.degree() + 1) / 2;
  for (int k = 1; k <= max_k; ++k) {
    term = (term.d_q(2) + term.d_p(2)) * cplx(-hbar / (4.0 * k), 0.0);
    out += term;
  }
  return out;
}

}  // namespace

OperatorMatrix position_matrix(std::size_t dim, double hbar) {
  const MatrixXcd a = lowering(dim);
  return {std::sqrt(hbar / 2.0) * (a + a.adjoint()), hbar};
}

OperatorMatrix momentum_matrix(std::size_t dim, double hbar) {
  const MatrixXcd a = lowering(dim);
  return {cplx(0.0, std::sqrt(hbar / 2.0)) * (a.adjoint() - a), hbar};
}

double commutator_defect(std::size_t dim, std::size_t guard, double hbar) {
  const OperatorMatrix q = position_matrix(dim, hbar);
  const OperatorMatrix p = momentum_matrix(dim, hbar);
  const MatrixXcd c = q.entries * p.entries - p.entries * q.entries;
  const auto keep = static_cast<Index>(dim > guard ? dim - guard : 0);
  const MatrixXcd expect = cplx(0.0, hbar) * MatrixXcd::Identity(keep, keep);
  return keep == 0 ? 0.0 : (c.topLeftCorner(keep, keep) - expect).cwiseAbs().maxCoeff();
}

OperatorMatrix weyl_to_matrix(const PolySymbol& symbol, std::size_t dim, double hbar) {
  const int degree = std::max(symbol.degree(), 0);
  if (degree > 12) throw Error(ErrorCode::DegreeOverflow, "oracle symbols are limited to degree 12");
  const auto d = static_cast<std::size_t>(degree);
  if (dim <= d + 1) throw Error(ErrorCode::TruncationTooSevere, "basis dimension must exceed degree + 1");
  if (commutator_defect(dim, std::max<std::size_t>(d, 1), hbar) > kCommutatorTolerance)
    throw Error(ErrorCode::TruncationTooSevere, "[Q, P] deviates from i hbar on the retained block");

  const std::size_t work = dim + d;
  const MatrixXcd q = position_matrix(work, hbar).entries;
  const MatrixXcd p = momentum_matrix(work, hbar).entries;
  int max_a = 0, max_b = 0;
  for (const auto& [m, c] : symbol.terms()) {
    max_a = std::max(max_a, m.first);
    max_b = std::max(max_b, m.second);
  }
  // words(a, b): sum of all distinct products with a factors Q and b factors P.
  std::vector<std::vector<MatrixXcd>> words(static_cast<std::size_t>(max_a + 1),
                                            std::vector<MatrixXcd>(static_cast<std::size_t>(max_b + 1)));
  for (int a = 0; a <= max_a; ++a)
    for (int b = 0; b <= max_b; ++b) {
      auto& w = words[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (a == 0 && b == 0) {
        w = MatrixXcd::Identity(static_cast<Index>(work), static_cast<Index>(work));
        continue;
      }
      w = MatrixXcd::Zero(static_cast<Index>(work), static_cast<Index>(work));
      if (a > 0) w += q * words[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)];
      if (b > 0) w += p * words[static_cast<std::size_t>(a)][static_cast<std::size_t>(b - 1)];
    }

  MatrixXcd out = MatrixXcd::Zero(static_cast<Index>(work), static_cast<Index>(work));
  for (const auto& [m, c] : symbol.terms())
    out += (c / numerics::binomial(m.first + m.second, m.first)) *
           words[static_cast<std::size_t>(m.first)][static_cast<std::size_t>(m.second)];
  return {out.topLeftCorner(static_cast<Index>(dim), static_cast<Index>(dim)), hbar};
}

PolySymbol matrix_to_symbol(const OperatorMatrix& m, int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "degree must be non-negative");
  if (m.dim() <= static_cast<std::size_t>(degree))
    throw Error(ErrorCode::TruncationTooSevere, "matrix is smaller than the requested degree");
  const double hbar = m.hbar;
  const auto n = static_cast<std::size_t>(degree) + 1;
  // Normal-ordered coefficients: M = sum c_ij (a^dagger)^i a^j, and
  // M_ij = sum_r c_{i-r, j-r} sqrt(i! j!) / r!.
  std::vector<std::vector<cplx>> c(n, std::vector<cplx>(n, cplx(0.0, 0.0)));
  for (std::size_t s = 0; s <= static_cast<std::size_t>(degree); ++s)
    for (std::size_t i = 0; i <= s; ++i) {
      const std::size_t j = s - i;
      cplx v = m.entries(static_cast<Index>(i), static_cast<Index>(j)) *
               std::exp(-0.5 * (numerics::log_factorial(i) + numerics::log_factorial(j)));
      for (std::size_t r = 1; r <= std::min(i, j); ++r) v -= c[i - r][j - r] * std::exp(-numerics::log_factorial(r));
      c[i][j] = v;
    }
  // a -> alpha = (q + i p) / sqrt(2 hbar), a^dagger -> conj(alpha).
  const double inv = 1.0 / std::sqrt(2.0 * hbar);
  const PolySymbol alpha = PolySymbol::monomial(1, 0, inv) + PolySymbol::monomial(0, 1, cplx(0.0, inv));
  const PolySymbol alpha_bar = alpha.conj();
  PolySymbol normal;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j)
      if (c[i][j] != cplx(0.0, 0.0))
        normal += c[i][j] * (power(alpha_bar, static_cast<int>(i)) * power(alpha, static_cast<int>(j)));
  const PolySymbol weyl = unsmooth(normal, hbar);
  double scale = 0.0;
  for (const auto& [mono, v] : weyl.terms()) scale = std::max(scale, std::abs(v));
  return weyl.pruned(1e-13 * std::max(scale, 1.0));
}

std::vector<cplx> matrix_to_samples(const OperatorMatrix& m, const PhaseGrid& grid) {
  grid.require_reciprocal();
  if (grid.periodic_q()) throw Error(ErrorCode::InvalidArgument, "operator samples need a line grid");
  const std::size_t n = grid.n_q();
  const std::size_t dim = m.dim();
  const double scale = std::sqrt(m.hbar);
  const double half_step = 0.5 * grid.dq();
  // Half-step points x_i = q_min + (i - n) dq / 2 for i in [0, 4n], covering 2j +- m.
  const std::size_t points = 4 * n + 1;
  Eigen::MatrixXd h(static_cast<Index>(points), static_cast<Index>(dim));
  for (std::size_t i = 0; i < points; ++i) {
    const double x = grid.q_min() + (static_cast<double>(i) - static_cast<double>(n)) * half_step;
    const auto row = numerics::hermite_functions(x, dim, scale);
    for (std::size_t k = 0; k < dim; ++k) h(static_cast<Index>(i), static_cast<Index>(k)) = row[k];
  }
  const MatrixXcd hm = h.cast<cplx>() * m.entries;
  auto kernel = [&](long a, long b) {
    const auto ia = static_cast<Index>(a + static_cast<long>(n));
    const auto ib = static_cast<Index>(b + static_cast<long>(n));
    return (hm.row(ia) * h.row(ib).transpose().cast<cplx>())(0, 0);
  };

  const std::size_t window = 2 * n;
  const long half = static_cast<long>(n);
  std::vector<cplx> table(n * window);
  for (std::size_t j = 0; j < n; ++j) {
    const long c = 2 * static_cast<long>(j);
    cplx* row = table.data() + j * window;
    for (long mm = -half + 1; mm < half; ++mm) {
      const double sign = (mm % 2 == 0) ? 1.0 : -1.0;
      row[static_cast<std::size_t>((mm + static_cast<long>(window)) % static_cast<long>(window))] = sign * kernel(c + mm, c - mm);
    }
    const double sign = (half % 2 == 0) ? 1.0 : -1.0;
    row[n] = 0.5 * sign * (kernel(c - half, c + half) + kernel(c + half, c - half));
  }
  fourier::fft_rows(table, n, window, fourier::Direction::Forward);
  std::vector<cplx> out(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) out[j * n + k] = grid.dq() * table[j * window + 2 * k];
  return out;
}

}  // namespace phasespace
