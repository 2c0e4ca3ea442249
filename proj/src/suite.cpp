#include "phasespace/suite.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "phasespace/aharonov_bohm.hpp"
#include "phasespace/bargmann.hpp"
#include "phasespace/moyal.hpp"
#include "phasespace/weyl_oracle.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

namespace {

constexpr double kPi = std::numbers::pi;

PolySymbol random_poly(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolySymbol s;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) s.add_term(a, b, cplx(u(rng), u(rng)));
  return s;
}

WaveFunction random_packet(const PhaseGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-2.0, 2.0), width(0.7, 1.4);
  return make_gaussian_packet(g, pos(rng), pos(rng), width(rng), {});
}

class Battery {
 public:
  void check(const std::string& module, const std::string& name, double tolerance, const std::function<double()>& f) {
    SuiteCheck c{module, name, std::numeric_limits<double>::quiet_NaN(), tolerance, false};
    try {
      c.value = f();
      c.passed = c.value <= tolerance;
    } catch (const std::exception&) {
    }
    checks_.push_back(c);
  }

  std::vector<SuiteCheck> take() { return std::move(checks_); }

 private:
  std::vector<SuiteCheck> checks_;
};

}  // namespace

std::vector<SuiteCheck> run_property_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Battery b;
  const PhaseGrid line = PhaseGrid::line(-12.0, 12.0, 128);

  b.check("states", "momentum transform is unitary", 1e-12, [&] {
    const auto psi = random_packet(line, rng);
    return std::abs(to_momentum(psi).norm_squared() - psi.norm_squared());
  });

  b.check("weyl-wigner", "trace, bound and marginals of random packets", 1e-6, [&] {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const auto psi = random_packet(line, rng);
      const auto w = wigner_from_position(psi);
      worst = std::max(worst, std::abs(w.integral() - 1.0));
      worst = std::max(worst, std::max(0.0, w.max_abs() * kPi - 1.0 - 1e-9));
      const auto rho = marginal_position(w);
      double err = 0.0;
      for (std::size_t j = 0; j < rho.size(); ++j) err += std::pow(rho[j] - std::norm(psi.values[j]), 2) * line.dq();
      worst = std::max(worst, std::sqrt(err));
    }
    return worst;
  });

  b.check("weyl-wigner", "cross field of a state with itself is real", 1e-12, [&] {
    const auto psi = random_packet(line, rng);
    const auto c = cross_wigner(psi, psi);
    double worst = 0.0;
    for (const cplx& v : c.values) worst = std::max(worst, std::abs(v.imag()));
    return worst;
  });

  b.check("moyal", "q * p = q p + i hbar / 2", 1e-15, [] {
    const auto qp = star_poly(PolySymbol::q(), PolySymbol::p(), 1.0);
    return distance(qp, PolySymbol::monomial(1, 1) + PolySymbol::constant(cplx(0.0, 0.5)));
  });

  b.check("moyal", "star product matches the matrix oracle", 1e-8, [&] {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const auto x = random_poly(2, rng), y = random_poly(2, rng);
      const auto oracle = matrix_to_symbol(weyl_to_matrix(x, 20) * weyl_to_matrix(y, 20), 4);
      const auto star = star_poly(x, y, 1.0);
      worst = std::max(worst, distance(oracle, star) / star.coefficient_norm());
    }
    return worst;
  });

  b.check("moyal", "free evolution conserves the trace", 1e-8, [&] {
    const auto w0 = wigner_from_position(random_packet(line, rng));
    const HamiltonianSpec h = HamiltonianSpec::free_particle(1.0);
    const CrossWignerField as_field{w0.grid, std::vector<cplx>(w0.values.begin(), w0.values.end())};
    const auto w = evolve_wigner(w0, h, 0.5, {0.5 * stability_bound(as_field, h, h), true});
    return std::abs(w.integral() - w0.integral());
  });

  b.check("bargmann", "ground state maps to 1", 1e-10, [&] {
    const auto phi = sb_transform(make_gaussian_packet(line, 0.0, 0.0, 1.0, {}), {});
    double worst = std::abs(phi.coeffs[0] - 1.0);
    for (std::size_t n = 1; n < phi.size(); ++n) worst = std::max(worst, std::abs(phi.coeffs[n]));
    return worst;
  });

  b.check("bargmann", "transform round trip", 1e-8, [&] {
    const auto psi = random_packet(line, rng);
    const auto back = sb_inverse(sb_transform(psi, {}), line, {});
    double err = 0.0;
    for (std::size_t j = 0; j < psi.values.size(); ++j) err += std::norm(psi.values[j] - back.values[j]) * line.dq();
    return std::sqrt(err);
  });

  b.check("bargmann", "harmonic spectrum", 1e-10, [] {
    const auto e = harmonic_spectrum(60);
    double worst = 0.0;
    for (std::size_t n = 0; n < e.size(); ++n) worst = std::max(worst, std::abs(e[n] - (static_cast<double>(n) + 0.5)));
    return worst;
  });

  b.check("aharonov-bohm", "destructive electric run", 1e-6, [] {
    const auto s = ElectricScenario::destructive();
    return std::max(simulate_electric_ab(s, Formalism::Wigner).probability_at_tau,
                    simulate_electric_ab(s, Formalism::SegalBargmann).probability_at_tau);
  });

  b.check("aharonov-bohm", "destructive magnetic phase", 1e-3, [] {
    const auto s = MagneticScenario::destructive();
    return std::max(std::abs(std::abs(simulate_magnetic_ring(s, Formalism::Wigner).extracted_phase) - kPi),
                    std::abs(std::abs(simulate_magnetic_ring(s, Formalism::SegalBargmann).extracted_phase) - kPi));
  });

  b.check("aharonov-bohm", "gauge invariance of the detection ratio", 1e-10, [&] {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double c = u(rng), k = 0.5 * u(rng);
    GaugeFunction g;
    g.value = [=](double x, double t) { return c * std::sin(k * x + t); };
    g.d_x = [=](double x, double t) { return c * k * std::cos(k * x + t); };
    g.d_t = [=](double x, double t) { return c * std::cos(k * x + t); };
    ElectricScenario s = ElectricScenario::destructive();
    return gauge_transform_check(s, g, {4, 0.5, 0});
  });

  return b.take();
}

}  // namespace phasespace
