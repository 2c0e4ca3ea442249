#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phasespace/bargmann.hpp"
#include "phasespace/error.hpp"
#include "phasespace/numerics.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;
const SbScaling kUnits{};

PhaseGrid line_grid() { return PhaseGrid::line(-12.0, 12.0, 128); }

WaveFunction ground_state(const PhaseGrid& g) {
  WaveFunction psi{g, std::vector<cplx>(g.n_q())};
  for (std::size_t j = 0; j < g.n_q(); ++j) psi.values[j] = std::pow(kPi, -0.25) * std::exp(-0.5 * g.q(j) * g.q(j));
  return psi;
}

WaveFunction hermite_state(const PhaseGrid& g, std::size_t n) {
  WaveFunction psi{g, std::vector<cplx>(g.n_q())};
  for (std::size_t j = 0; j < g.n_q(); ++j) psi.values[j] = numerics::hermite_functions(g.q(j), n + 1, 1.0)[n];
  return psi;
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
  return std::sqrt(s * a.grid.dq());
}

// Random state with O(1) orthonormal amplitudes.
SBFunction random_sb(std::size_t size, std::size_t active, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  SBFunction f{std::vector<cplx>(size, cplx(0.0, 0.0))};
  for (std::size_t n = 0; n < active; ++n)
    f.coeffs[n] = cplx(d(rng), d(rng)) * std::exp(-0.5 * numerics::log_factorial(n));
  return f;
}

}  // namespace

TEST_CASE("ground state maps to the constant function") {
  const auto phi = sb_transform(ground_state(line_grid()), kUnits);
  CHECK(std::abs(phi.coeffs[0] - 1.0) < 1e-10);
  for (std::size_t n = 1; n < phi.size(); ++n) CHECK(std::abs(phi.coeffs[n]) < 1e-10);

  const auto zero = sb_transform(WaveFunction{line_grid(), std::vector<cplx>(128, cplx(0.0, 0.0))}, kUnits);
  for (const cplx& c : zero.coeffs) CHECK(c == cplx(0.0, 0.0));
}

TEST_CASE("Hermite functions map to monomials") {
  for (std::size_t n : {1u, 3u, 7u}) {
    const auto phi = sb_transform(hermite_state(line_grid(), n), kUnits);
    CAPTURE(n);
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const double expect = (k == n) ? std::exp(-0.5 * numerics::log_factorial(n)) : 0.0;
      CHECK(std::abs(phi.coeffs[k] - expect) < 1e-10);
    }
  }
}

TEST_CASE("transform rejects states that do not fit the truncation") {
  const PhaseGrid g = line_grid();
  const auto far = make_gaussian_packet(g, 5.0, 0.0, 1.0, {});
  try {
    sb_transform(far, kUnits, 16);
    FAIL("expected TruncationOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationOverflow);
  }
}

TEST_CASE("transform is an isometry and the inverse recovers the packet") {
  const PhaseGrid g = line_grid();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5), w(0.7, 1.4);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = make_gaussian_packet(g, u(rng), u(rng), w(rng), {});
    const auto b = make_gaussian_packet(g, u(rng), u(rng), w(rng), {});
    const auto fa = sb_transform(a, kUnits), fb = sb_transform(b, kUnits);
    CHECK(std::abs(sb_inner(fa, fb) - a.inner(b)) < 1e-8);
    CHECK(std::abs(sb_inner(fa, fa) - 1.0) < 1e-8);
    CHECK(l2_distance(sb_inverse(fa, g, kUnits), a) < 1e-8);
  }
}

TEST_CASE("contour inverse reproduces the low states") {
  const PhaseGrid g = line_grid();
  const auto ground = sb_inverse_contour(SBFunction{{1.0, 0.0, 0.0, 0.0}}, g, kUnits);
  CHECK(l2_distance(ground, ground_state(g)) < 1e-12);
  // Creation in position space: (q - d/dq) / sqrt2 applied to the ground state.
  WaveFunction first{g, std::vector<cplx>(g.n_q())};
  for (std::size_t j = 0; j < g.n_q(); ++j) {
    const double q = g.q(j);
    first.values[j] = (q * ground_state(g).values[j] + q * ground_state(g).values[j]) / std::numbers::sqrt2;
  }
  const auto via_contour = sb_inverse_contour(SBFunction{{0.0, 1.0, 0.0, 0.0}}, g, kUnits);
  CHECK(l2_distance(via_contour, first) < 1e-12);
  CHECK(l2_distance(sb_inverse(SBFunction{{0.0, 1.0}}, g, kUnits), first) < 1e-12);

  const auto packet = make_gaussian_packet(g, 0.8, -0.6, 1.0, {});
  CHECK(l2_distance(sb_inverse_contour(sb_transform(packet, kUnits), g, kUnits), packet) < 1e-8);
}

TEST_CASE("contour inverse detects runaway growth") {
  // Truncated exp(-0.6 z^2): grows like e^{0.1 y^2} against the weight.
  SBFunction phi{std::vector<cplx>(64, cplx(0.0, 0.0))};
  for (std::size_t k = 0; 2 * k < 64; ++k)
    phi.coeffs[2 * k] = std::pow(-0.6, static_cast<double>(k)) * std::exp(-numerics::log_factorial(k));
  try {
    sb_inverse_contour(phi, line_grid(), kUnits);
    FAIL("expected QuadratureDivergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuadratureDivergence);
  }
}

TEST_CASE("inner product of monomials and adjointness") {
  for (std::size_t n = 0; n < 8; ++n)
    for (std::size_t m = 0; m < 8; ++m) {
      SBFunction a{std::vector<cplx>(8, cplx(0.0, 0.0))}, b{std::vector<cplx>(8, cplx(0.0, 0.0))};
      a.coeffs[n] = 1.0;
      b.coeffs[m] = 1.0;
      const double expect = (n == m) ? std::exp(numerics::log_factorial(n)) : 0.0;
      CHECK(std::abs(sb_inner(a, b) - expect) <= 1e-12 * std::max(1.0, expect));
    }
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_sb(64, 60, rng), g = random_sb(64, 60, rng);
    CHECK(sb_inner(f, f).real() > 0.0);
    CHECK(std::abs(sb_inner(f, f).imag()) < 1e-12);
    const cplx lhs = sb_inner(sb_apply(SbOperator::Annihilate, f), g);
    const cplx rhs = sb_inner(f, sb_apply(SbOperator::Create, g, Truncation::Drop));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
  CHECK(sb_inner(SBFunction{std::vector<cplx>(5, cplx(0.0, 0.0))}, SBFunction{std::vector<cplx>(5, cplx(0.0, 0.0))}) ==
        cplx(0.0, 0.0));
}

TEST_CASE("ladder operators") {
  const auto vacuum = sb_apply(SbOperator::Annihilate, SBFunction{{1.0, 0.0, 0.0}});
  for (const cplx& c : vacuum.coeffs) CHECK(c == cplx(0.0, 0.0));

  std::mt19937_64 rng(12);
  const auto phi = random_sb(64, 64, rng);
  const auto dz = sb_apply(SbOperator::Annihilate, sb_apply(SbOperator::Create, phi, Truncation::Drop));
  const auto zd = sb_apply(SbOperator::Create, sb_apply(SbOperator::Annihilate, phi), Truncation::Drop);
  for (std::size_t n = 0; n + 1 < phi.size(); ++n) CHECK(std::abs(dz.coeffs[n] - zd.coeffs[n] - phi.coeffs[n]) < 1e-14);

  try {
    sb_apply(SbOperator::Create, phi);
    FAIL("expected TruncationOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationOverflow);
  }
}

TEST_CASE("plane-wave image is a momentum eigenfunction") {
  const double energy = 2.0, mass = 1.0;
  const double k = std::sqrt(2.0 * energy * mass);
  const auto phi = sb_plane_wave(k, 48);
  // Closed form exp(z (4 i sqrt(E / m) + z) / 2) at a few points.
  for (cplx z : {cplx(0.3, -0.2), cplx(-0.5, 0.4)})
    CHECK(std::abs(phi(z) - std::exp(z * (cplx(0.0, 4.0 * std::sqrt(energy / mass)) + z) / 2.0)) < 1e-12);
  const auto p = sb_apply(SbOperator::Momentum, phi, Truncation::Drop);
  for (std::size_t n = 0; n + 2 < phi.size(); ++n)
    CHECK(std::abs(p.coeffs[n] - k * phi.coeffs[n]) <= 1e-12 * std::max(1.0, std::abs(k * phi.coeffs[n])));
}

TEST_CASE("oscillator spectrum") {
  const auto e = harmonic_spectrum(64);
  for (std::size_t n = 0; n < 60; ++n) CHECK(std::abs(e[n] - (static_cast<double>(n) + 0.5)) <= 1e-10);
  for (std::size_t n = 0; n + 1 < e.size(); ++n) CHECK(std::abs(e[n + 1] - e[n] - 1.0) <= 1e-12);
  // Number-basis oracle: the Weyl image of (q^2 + p^2) / 2.
  const auto h = weyl_to_matrix(PolySymbol::monomial(2, 0, 0.5) + PolySymbol::monomial(0, 2, 0.5), 64);
  for (std::size_t n = 0; n + 4 < 64; ++n) CHECK(std::abs(h.entries(n, n).real() - e[n]) <= 1e-10);
}

TEST_CASE("evolution") {
  std::mt19937_64 rng(21);
  const auto h_osc = sb_oscillator(kUnits, 64);
  SBFunction eigen{std::vector<cplx>(64, cplx(0.0, 0.0))};
  eigen.coeffs[3] = 1.0;
  const auto e3 = sb_evolve(eigen, h_osc, 0.7);
  for (std::size_t n = 0; n < 64; ++n)
    CHECK(std::abs(e3.coeffs[n] - std::polar(1.0, -3.5 * 0.7) * eigen.coeffs[n]) < 1e-13);

  const auto phi = sb_transform(make_gaussian_packet(line_grid(), 1.0, 0.5, 1.0, {}), kUnits);
  const auto same = sb_evolve(phi, h_osc, 0.0);
  for (std::size_t n = 0; n < 64; ++n) CHECK(same.coeffs[n] == phi.coeffs[n]);
  const auto revived = sb_evolve(phi, h_osc, 2.0 * kPi);
  CHECK(std::abs(std::abs(sb_inner(revived, phi)) - 1.0) < 1e-10);
  const auto half = sb_evolve(phi, h_osc, kPi);
  CHECK(std::abs(sb_inner(half, phi)) < 0.9);

  // Free particle: norm preserved.
  const auto free = sb_hamiltonian(HamiltonianSpec::free_particle(1.0), kUnits, 64);
  const auto moved = sb_evolve(phi, free, 0.8);
  CHECK(std::abs(moved.norm_squared() - phi.norm_squared()) < 1e-8);

  // The oscillator via the position eigenbasis acts like the diagonal form on low states.
  const auto via_position = sb_hamiltonian(HamiltonianSpec::oscillator(1.0, 1.0), kUnits, 64);
  const auto d = sb_evolve(phi, via_position, 0.9), r = sb_evolve(phi, h_osc, 0.9);
  CHECK(std::abs(sb_inner(d, r) - 1.0) < 1e-8);

  OperatorMatrix bad = free;
  bad.entries(0, 1) += 0.5;
  try {
    sb_evolve(phi, bad, 1.0);
    FAIL("expected NonHermitian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitian);
  }
  (void)rng;
}

TEST_CASE("Husimi function of the ground state") {
  const auto plane = PlaneGrid::uniform(-4.0, 4.0, 81, -4.0, 4.0, 81);
  const auto h = husimi_from_sb(SBFunction{{1.0}}, plane);
  CHECK(h.at(40, 40) == doctest::Approx(husimi_bound()).epsilon(1e-14));
  CHECK(h.max() == h.at(40, 40));
  CHECK(h.min() >= -1e-12);
  CHECK(std::abs(h.integral() - 1.0) < 1e-6);
  for (std::size_t i = 0; i < plane.n_re; ++i)
    for (std::size_t k = 0; k < plane.n_im; ++k)
      CHECK(h.at(i, k) == doctest::Approx(std::exp(-std::norm(plane.z(i, k))) / kPi).epsilon(1e-13));
}

TEST_CASE("Husimi function has no position marginal") {
  const auto plane = PlaneGrid::uniform(-5.0, 5.0, 101, -5.0, 5.0, 101);
  const auto h = husimi_from_sb(SBFunction{{0.0, 1.0}}, plane);
  double gap = 0.0;
  for (std::size_t i = 0; i < plane.n_re; ++i) {
    double column = 0.0;
    for (std::size_t k = 0; k < plane.n_im; ++k) column += h.at(i, k) * plane.im_step;
    // Density of re z = x / sqrt2 when x follows |h_1(x)|^2.
    const double x = std::numbers::sqrt2 * plane.re(i);
    const double h1 = numerics::hermite_functions(x, 2, 1.0)[1];
    gap += std::pow(column - std::numbers::sqrt2 * h1 * h1, 2) * plane.re_step;
  }
  CHECK(std::sqrt(gap) > 1e-3);
  CHECK(h.max() <= husimi_bound() + 1e-9);
}

TEST_CASE("Husimi from Wigner agrees with Husimi from SB") {
  const PhaseGrid g = PhaseGrid::line(-10.0, 10.0, 80);
  const PlaneGrid plane = PlaneGrid::matching(g, kUnits);
  std::vector<WaveFunction> states = {ground_state(g), hermite_state(g, 1), hermite_state(g, 2),
                                      make_gaussian_packet(g, 1.0, -0.5, 1.0, {}),
                                      make_gaussian_packet(g, -0.7, 1.2, 0.8, {})};
  for (std::size_t s = 0; s < states.size(); ++s) {
    CAPTURE(s);
    const auto w = wigner_from_position(states[s]);
    const auto from_w = husimi_from_wigner(w, plane, kUnits);
    const auto from_sb = husimi_from_sb(sb_transform(states[s], kUnits), plane);
    double gap = 0.0;
    for (std::size_t i = 0; i < from_w.values.size(); ++i) gap = std::max(gap, std::abs(from_w.values[i] - from_sb.values[i]));
    CHECK(gap <= 1e-6);
    CHECK(from_w.min() >= -1e-12);
    CHECK(from_sb.max() <= husimi_bound() + 1e-9);
    CHECK(std::abs(from_w.integral() - 1.0) < 1e-6);

    std::vector<double> q_symbol(g.n_q() * g.n_p()), p_symbol(g.n_q() * g.n_p());
    for (std::size_t j = 0; j < g.n_q(); ++j)
      for (std::size_t k = 0; k < g.n_p(); ++k) {
        q_symbol[j * g.n_p() + k] = g.q(j);
        p_symbol[j * g.n_p() + k] = g.p(k);
      }
    CHECK(std::abs(husimi_mean_position(from_sb, kUnits) - expectation(w, q_symbol)) < 1e-6);
    CHECK(std::abs(husimi_mean_momentum(from_sb, kUnits) - expectation(w, p_symbol)) < 1e-6);
  }
  const auto excited = wigner_from_position(hermite_state(g, 1));
  CHECK(excited.at(g.n_q() / 2, g.n_p() / 2) < 0.0);

  const auto zero = husimi_from_wigner(WignerField{g, std::vector<double>(g.n_q() * g.n_p(), 0.0)}, plane, kUnits);
  CHECK(zero.max() == 0.0);
  CHECK(zero.min() == 0.0);
  try {
    husimi_from_wigner(excited, PlaneGrid::uniform(-1.0, 1.0, 8, -1.0, 1.0, 8), kUnits);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}
