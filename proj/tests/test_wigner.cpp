#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseGrid line_grid() { return PhaseGrid::line(-12.0, 12.0, 128); }

WaveFunction cat_state(const PhaseGrid& g) {
  auto a = make_gaussian_packet(g, -2.0, 0.5, 1.0, {});
  const auto b = make_gaussian_packet(g, 2.0, -0.5, 1.0, {});
  for (std::size_t j = 0; j < a.values.size(); ++j) a.values[j] += b.values[j];
  a.normalize();
  return a;
}

// W(q_j, p_k) by direct summation over offsets y = m dq with the analytic state.
template <class Psi>
std::vector<double> direct_wigner(const PhaseGrid& g, Psi&& psi) {
  const std::size_t n = g.n_q();
  const long half = static_cast<long>(n / 2);
  std::vector<double> out(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      cplx acc(0.0, 0.0);
      for (long m = -half; m < half; ++m) {
        const double y = static_cast<double>(m) * g.dq();
        const double w = (m == -half) ? 0.5 : 1.0;
        acc += w * std::polar(1.0, -g.p(k) * y / g.hbar()) * psi(g.q(j) + 0.5 * y) * std::conj(psi(g.q(j) - 0.5 * y));
        if (m == -half) {
          acc += w * std::polar(1.0, g.p(k) * y / g.hbar()) * psi(g.q(j) - 0.5 * y) * std::conj(psi(g.q(j) + 0.5 * y));
        }
      }
      out[j * n + k] = (acc * g.dq() / (2.0 * kPi * g.hbar())).real();
    }
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("ground-state Wigner function is the closed-form Gaussian") {
  const PhaseGrid g = line_grid();
  const auto w = wigner_from_position(make_gaussian_packet(g, 0.0, 0.0, 1.0, {}));
  const auto exact = sample_symbol(g, [](double q, double p) { return std::exp(-q * q - p * p) / kPi; });
  CHECK(max_diff(w.values, exact) < 1e-12);
  CHECK(w.at(g.n_q() / 2, g.n_p() / 2) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("zero state gives a zero field") {
  const PhaseGrid g = line_grid();
  WaveFunction zero{g, std::vector<cplx>(g.n_q())};
  const auto w = wigner_from_position(zero);
  CHECK(w.max_abs() == 0.0);
  const auto wm = wigner_from_momentum(MomentumWaveFunction{g, std::vector<cplx>(g.n_p())});
  CHECK(wm.max_abs() == 0.0);
}

TEST_CASE("Wigner values stay inside the quantum bound") {
  const PhaseGrid g = line_grid();
  for (double hbar : {1.0, 0.5}) {
    const PhaseGrid gh = PhaseGrid::line(-12.0, 12.0, 128, hbar);
    PhysicalConstants c;
    c.hbar = hbar;
    auto psi = make_gaussian_packet(gh, -1.5, 1.0, 0.8, c);
    const auto b = make_gaussian_packet(gh, 1.5, -1.0, 0.8, c);
    for (std::size_t j = 0; j < psi.values.size(); ++j) psi.values[j] += b.values[j];
    psi.normalize();
    const auto w = wigner_from_position(psi);
    CHECK(w.max_abs() <= (1.0 / (kPi * hbar)) * (1.0 + 1e-9));
  }
  const auto cat = wigner_from_position(cat_state(g));
  double lowest = 0.0;
  for (double v : cat.values) lowest = std::min(lowest, v);
  CHECK(lowest < -0.1);  // interference fringes go negative
}

TEST_CASE("normalization, purity and marginals") {
  const PhaseGrid g = line_grid();
  const auto psi = cat_state(g);
  const auto w = wigner_from_position(psi);
  CHECK(std::abs(w.integral() - 1.0) < 1e-6);
  CHECK(std::abs(purity(w) - 1.0 / (2.0 * kPi)) < 1e-5);

  const auto rho_q = marginal_position(w);
  double err = 0.0;
  for (std::size_t j = 0; j < rho_q.size(); ++j) err += std::pow(rho_q[j] - std::norm(psi.values[j]), 2) * g.dq();
  CHECK(std::sqrt(err) < 1e-6);

  const auto mom = to_momentum(psi);
  const auto rho_p = marginal_momentum(w);
  err = 0.0;
  for (std::size_t k = 0; k < rho_p.size(); ++k) err += std::pow(rho_p[k] - std::norm(mom.values[k]), 2) * g.dp();
  CHECK(std::sqrt(err) < 1e-6);
}

TEST_CASE("position marginal of the ground state") {
  const PhaseGrid g = line_grid();
  const auto rho = marginal_position(wigner_from_position(make_gaussian_packet(g, 0.0, 0.0, 1.0, {})));
  double total = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    CHECK(std::abs(rho[j] - std::exp(-g.q(j) * g.q(j)) / std::sqrt(kPi)) < 1e-12);
    total += rho[j] * g.dq();
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("position and momentum formulas agree") {
  const PhaseGrid g = line_grid();
  for (double p0 : {0.0, 1.5, -2.25}) {
    const auto psi = make_gaussian_packet(g, 0.7, p0, 1.2, {});
    const auto a = wigner_from_position(psi);
    const auto b = wigner_from_momentum(to_momentum(psi));
    CHECK(max_diff(a.values, b.values) < 1e-8);
  }
  const auto cat = cat_state(g);
  CHECK(max_diff(wigner_from_position(cat).values, wigner_from_momentum(to_momentum(cat)).values) < 1e-8);
}

TEST_CASE("expectation values of the ground state") {
  const PhaseGrid g = line_grid();
  const auto w = wigner_from_position(make_gaussian_packet(g, 0.0, 0.0, 1.0, {}));
  CHECK(expectation(w, sample_symbol(g, [](double, double) { return 1.0; })) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(expectation(w, sample_symbol(g, [](double q, double p) { return 0.5 * (q * q + p * p); })) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(expectation(w, sample_symbol(g, [](double q, double) { return q; }))) < 1e-10);
}

TEST_CASE("ring modes concentrate on their momentum row") {
  const double radius = 1.0;
  const PhaseGrid ring = PhaseGrid::ring(radius, 32);
  const long index = 3;
  const auto mode = make_ring_mode(ring, index);
  const auto w = wigner_from_position(mode);
  const auto wm = wigner_from_momentum(to_momentum(mode));
  const std::size_t row = ring.n_p() / 2 + index;
  for (std::size_t j = 0; j < ring.n_q(); ++j)
    for (std::size_t k = 0; k < ring.n_p(); ++k) {
      const double expect = (k == row) ? 1.0 / (2.0 * kPi) : 0.0;
      CHECK(std::abs(w.at(j, k) - expect) < 1e-12);
      CHECK(std::abs(wm.at(j, k) - expect) < 1e-12);
    }
  CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ring superposition matches direct summation") {
  const double radius = 1.3;
  const PhaseGrid ring = PhaseGrid::ring(radius, 32);
  const long index = 2;
  const double amp = 1.0 / std::sqrt(2.0 * 2.0 * kPi * radius);
  auto analytic = [&](double s) {
    const double k = static_cast<double>(index) / radius;
    return amp * (std::polar(1.0, k * s) + std::polar(1.0, -k * s));
  };
  WaveFunction psi{ring, std::vector<cplx>(ring.n_q())};
  for (std::size_t j = 0; j < ring.n_q(); ++j) psi.values[j] = analytic(ring.q(j));
  const auto oracle = direct_wigner(ring, analytic);
  CHECK(max_diff(wigner_from_position(psi).values, oracle) < 1e-12);
  CHECK(max_diff(wigner_from_momentum(to_momentum(psi)).values, oracle) < 1e-12);
}

TEST_CASE("cross term of opposite ring modes lives on the zero-momentum row") {
  const double radius = 1.0;
  const PhaseGrid ring = PhaseGrid::ring(radius, 32);
  const long index = 4;
  const double p0 = static_cast<double>(index) / radius;
  const auto w = cross_wigner(make_ring_mode(ring, index), make_ring_mode(ring, -index));
  const std::size_t zero_row = ring.n_p() / 2;
  for (std::size_t j = 0; j < ring.n_q(); ++j)
    for (std::size_t k = 0; k < ring.n_p(); ++k) {
      const cplx expect = (k == zero_row) ? std::polar(1.0 / (2.0 * kPi), 2.0 * p0 * ring.q(j)) : cplx(0.0, 0.0);
      CHECK(std::abs(w.at(j, k) - expect) < 1e-12);
    }
}

TEST_CASE("cross Wigner symmetries") {
  const PhaseGrid g = line_grid();
  const auto a = make_gaussian_packet(g, -1.0, 1.0, 1.0, {});
  const auto b = make_gaussian_packet(g, 1.5, -0.5, 1.3, {});
  const auto ab = cross_wigner(a, b);
  const auto ba = cross_wigner(b, a);
  double err = 0.0;
  for (std::size_t i = 0; i < ab.values.size(); ++i) err = std::max(err, std::abs(ab.values[i] - std::conj(ba.values[i])));
  CHECK(err < 1e-12);

  const auto aa = cross_wigner(a, a);
  const auto diag = wigner_from_position(a);
  double imag = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < aa.values.size(); ++i) {
    imag = std::max(imag, std::abs(aa.values[i].imag()));
    diff = std::max(diff, std::abs(aa.values[i].real() - diag.values[i]));
  }
  CHECK(imag <= 1e-12);
  CHECK(diff == 0.0);

  const PhaseGrid other = PhaseGrid::line(-10.0, 10.0, 128);
  try {
    cross_wigner(a, make_gaussian_packet(other, 0.0, 0.0, 1.0, {}));
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("a state cut off by the box is reported") {
  const PhaseGrid g = PhaseGrid::line(-4.0, 4.0, 64);
  WaveFunction psi{g, std::vector<cplx>(g.n_q())};
  for (std::size_t j = 0; j < g.n_q(); ++j) psi.values[j] = std::exp(-g.q(j) * g.q(j) / 8.0);
  psi.normalize();
  try {
    wigner_from_position(psi);
    FAIL("expected AliasingDetected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AliasingDetected);
  }
}
