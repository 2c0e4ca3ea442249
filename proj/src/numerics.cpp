#include "phasespace/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"

namespace phasespace::numerics {

namespace {

// Eigen-decomposition of the symmetric Jacobi matrix with zero diagonal.
Quadrature golub_welsch(std::size_t order, double mu0, double (*offdiag_sq)(std::size_t)) {
  if (order == 0) throw Error(ErrorCode::InvalidArgument, "quadrature order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order), static_cast<Eigen::Index>(order));
  for (std::size_t k = 1; k < order; ++k) {
    const double b = std::sqrt(offdiag_sq(k));
    jacobi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
    jacobi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Quadrature q;
  q.nodes.resize(order);
  q.weights.resize(order);
  for (std::size_t i = 0; i < order; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    q.nodes[i] = es.eigenvalues()(idx);
    const double v0 = es.eigenvectors()(0, idx);
    q.weights[i] = mu0 * v0 * v0;
  }
  return q;
}

}  // namespace

Quadrature gauss_hermite(std::size_t order) {
  return golub_welsch(order, std::sqrt(std::numbers::pi), [](std::size_t k) { return 0.5 * static_cast<double>(k); });
}

Quadrature gauss_legendre(std::size_t order) {
  return golub_welsch(order, 2.0, [](std::size_t k) {
    const double kk = static_cast<double>(k);
    return kk * kk / (4.0 * kk * kk - 1.0);
  });
}

std::vector<double> hermite_functions(double x, std::size_t count, double scale) {
  std::vector<double> h(count, 0.0);
  if (count == 0) return h;
  const double xi = x / scale;
  h[0] = std::pow(std::numbers::pi * scale * scale, -0.25) * std::exp(-0.5 * xi * xi);
  if (count > 1) h[1] = std::sqrt(2.0) * xi * h[0];
  for (std::size_t n = 1; n + 1 < count; ++n) {
    const double nn = static_cast<double>(n);
    h[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * xi * h[n] - std::sqrt(nn / (nn + 1.0)) * h[n - 1];
  }
  return h;
}

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

}  // namespace phasespace::numerics
