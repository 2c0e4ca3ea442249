// Acceptance run: one PASS/FAIL line per criterion, with its runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "phasespace/aharonov_bohm.hpp"
#include "phasespace/bargmann.hpp"
#include "phasespace/moyal.hpp"
#include "phasespace/numerics.hpp"
#include "phasespace/weyl_oracle.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates named maxima and their limits into one outcome.
class Tally {
 public:
  void at_most(const std::string& what, double value, double limit) {
    const bool ok = value <= limit;
    pass_ = pass_ && ok;
    add(what, value, ok ? "<=" : ">", limit);
  }
  void at_least(const std::string& what, double value, double limit) {
    const bool ok = value >= limit;
    pass_ = pass_ && ok;
    add(what, value, ok ? ">=" : "<", limit);
  }
  Outcome done() const { return {pass_, detail_}; }

 private:
  void add(const std::string& what, double value, const char* rel, double limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s %.3e %s %.10g", detail_.empty() ? "" : "; ", what.c_str(), value, rel, limit);
    detail_ += buf;
  }
  bool pass_ = true;
  std::string detail_;
};

PolySymbol random_poly(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolySymbol s;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) s.add_term(a, b, cplx(u(rng), u(rng)));
  return s;
}

double plateau(double x, double centre, double width) {
  return 0.5 * (std::erf((x + centre) / width) - std::erf((x - centre) / width));
}

WaveFunction hermite_state(const PhaseGrid& g, std::size_t n) {
  WaveFunction psi{g, std::vector<cplx>(g.n_q())};
  for (std::size_t j = 0; j < g.n_q(); ++j) psi.values[j] = numerics::hermite_functions(g.q(j), n + 1, 1.0)[n];
  return psi;
}

ElectricScenario electric_with_phase(double angle) {
  ElectricScenario s;
  s.tau = 2.0 * kPi / s.energy;
  s.phi_1 = angle / (s.consts.charge * s.tau);
  return s;
}

Outcome electric_closed_form() {
  Tally t;
  double gap = 0.0;
  for (int i = 1; i <= 8; ++i) {
    const ElectricScenario s = electric_with_phase(2.0 * kPi * i / 9.0);
    for (Formalism f : {Formalism::Wigner, Formalism::SegalBargmann}) {
      const ScenarioResult r = simulate_electric_ab(s, f);
      for (std::size_t k = 0; k < r.times.size(); ++k)
        gap = std::max(gap, std::abs(r.probability[k] - electric_ab_closed_form(s, r.times[k])));
    }
  }
  t.at_most("sweep |P - closed form|", gap, 1e-6);
  const ElectricScenario d = ElectricScenario::destructive();
  t.at_most("destructive P(tau) wigner", simulate_electric_ab(d, Formalism::Wigner).probability_at_tau, 1e-6);
  t.at_most("destructive P(tau) sb", simulate_electric_ab(d, Formalism::SegalBargmann).probability_at_tau, 1e-6);
  return t.done();
}

Outcome magnetic_phase() {
  Tally t;
  const MagneticScenario base = MagneticScenario::destructive();
  double gap = 0.0;
  for (double scale : {0.2, 0.5, 0.9, 1.4}) {
    MagneticScenario s = base;
    s.field = scale * base.field;
    const double closed = magnetic_phase_closed_form(s);
    for (Formalism f : {Formalism::Wigner, Formalism::SegalBargmann})
      gap = std::max(gap, std::abs(wrap_phase(simulate_magnetic_ring(s, f).extracted_phase - closed)));
  }
  t.at_most("sweep |phase - 2 p0 q A tau / m|", gap, 1e-3);
  double to_pi = 0.0, prob = 0.0;
  for (Formalism f : {Formalism::Wigner, Formalism::SegalBargmann}) {
    const ScenarioResult r = simulate_magnetic_ring(base, f);
    to_pi = std::max(to_pi, std::abs(std::abs(r.extracted_phase) - kPi));
    prob = std::max(prob, r.probability_at_tau);
  }
  t.at_most("destructive |phase - pi|", to_pi, 1e-3);
  t.at_most("destructive P", prob, 1e-4);
  return t.done();
}

Outcome wigner_battery() {
  Tally t;
  const PhaseGrid g = PhaseGrid::line(-12.0, 12.0, 128);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pos(-2.0, 2.0), width(0.7, 1.4);
  double imag = 0.0, trace = 0.0, bound = 0.0, marg_q = 0.0, marg_p = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto psi = make_gaussian_packet(g, pos(rng), pos(rng), width(rng), {});
    for (const cplx& v : cross_wigner(psi, psi).values) imag = std::max(imag, std::abs(v.imag()));
    const auto w = wigner_from_position(psi);
    trace = std::max(trace, std::abs(w.integral() - 1.0));
    bound = std::max(bound, w.max_abs() * kPi);
    const auto rq = marginal_position(w);
    double e = 0.0;
    for (std::size_t j = 0; j < rq.size(); ++j) e += std::pow(rq[j] - std::norm(psi.values[j]), 2) * g.dq();
    marg_q = std::max(marg_q, std::sqrt(e));
    const auto mom = to_momentum(psi);
    const auto rp = marginal_momentum(w);
    e = 0.0;
    for (std::size_t k = 0; k < rp.size(); ++k) e += std::pow(rp[k] - std::norm(mom.values[k]), 2) * g.dp();
    marg_p = std::max(marg_p, std::sqrt(e));
  }
  t.at_most("imag residue", imag, 1e-12);
  t.at_most("|trace - 1|", trace, 1e-6);
  t.at_most("pi hbar max|W|", bound, 1.0 + 1e-9);
  t.at_most("position marginal L2", marg_q, 1e-6);
  t.at_most("momentum marginal L2", marg_p, 1e-6);
  return t.done();
}

Outcome star_oracle() {
  Tally t;
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> deg(0, 4);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double hbar = (i % 3 == 0) ? 0.5 : 1.0;
    const auto a = random_poly(deg(rng), rng), b = random_poly(deg(rng), rng);
    const auto star = star_poly(a, b, hbar);
    const auto oracle =
        matrix_to_symbol(weyl_to_matrix(a, 24, hbar) * weyl_to_matrix(b, 24, hbar), std::max(a.degree(), 0) + std::max(b.degree(), 0));
    worst = std::max(worst, distance(oracle, star) / std::max(star.coefficient_norm(), 1e-300));
  }
  t.at_most("matrix oracle vs star_poly", worst, 1e-8);

  // Grid backend on windowed polynomials, compared on the interior where the
  // windows are flat.
  const PhaseGrid g = PhaseGrid::line(-16.0, 16.0, 128);
  auto window = [](double q, double p) { return plateau(q, 9.0, 1.2) * plateau(p, 6.0, 1.0); };
  double grid_gap = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto a = random_poly(2, rng), b = random_poly(2, rng);
    const auto ga = GridSymbol::sample(g, [&](double q, double p) { return a(q, p) * window(q, p); });
    const auto gb = GridSymbol::sample(g, [&](double q, double p) { return b(q, p) * window(q, p); });
    const auto prod = star_grid(ga, gb);
    const auto exact = star_poly(a, b, 1.0);
    for (std::size_t j = 0; j < g.n_q(); ++j)
      for (std::size_t k = 0; k < g.n_p(); ++k) {
        const double q = g.q(j), p = g.p(k);
        if (std::abs(q) > 1.5 || std::abs(p) > 1.5) continue;
        grid_gap = std::max(grid_gap, std::abs(prod.at(j, k) - exact(q, p)) / std::max(1.0, std::abs(exact(q, p))));
      }
  }
  t.at_most("grid vs poly interior", grid_gap, 1e-8);
  const double hbar = 0.7;
  t.at_most("q*p - (qp + i hbar/2)",
            distance(star_poly(PolySymbol::q(), PolySymbol::p(), hbar), PolySymbol::monomial(1, 1) + PolySymbol::constant(0.5 * I * hbar)),
            1e-15);
  t.at_most("[q,p]_M - i hbar", distance(moyal_bracket(PolySymbol::q(), PolySymbol::p(), hbar), PolySymbol::constant(I * hbar)), 1e-15);
  return t.done();
}

Outcome classical_limit() {
  Tally t;
  std::mt19937_64 rng(17);
  const auto a = random_poly(4, rng), b = random_poly(4, rng);
  const auto e = classical_limit_probe(a, b, {1.0, 0.5, 0.25, 0.125});
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    lo = std::min(lo, e[i - 1] / e[i]);
    hi = std::max(hi, e[i - 1] / e[i]);
  }
  t.at_least("smallest halving ratio", lo, 3.5);
  t.at_most("largest halving ratio", hi, 4.5);
  return t.done();
}

SBFunction random_sb(std::size_t size, std::size_t active, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  SBFunction f{std::vector<cplx>(size, cplx(0.0, 0.0))};
  for (std::size_t n = 0; n < active; ++n)
    f.coeffs[n] = cplx(d(rng), d(rng)) * std::exp(-0.5 * numerics::log_factorial(n));
  return f;
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
  return std::sqrt(s * a.grid.dq());
}

Outcome sb_battery() {
  Tally t;
  const SbScaling units{};
  const auto e = harmonic_spectrum(64);
  double spectrum = 0.0;
  for (std::size_t n = 0; n < 60; ++n) spectrum = std::max(spectrum, std::abs(e[n] - (static_cast<double>(n) + 0.5)));
  t.at_most("spectrum n + 1/2", spectrum, 1e-10);

  const PhaseGrid g = PhaseGrid::line(-12.0, 12.0, 128);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5), w(0.7, 1.4);
  double roundtrip = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto psi = make_gaussian_packet(g, u(rng), u(rng), w(rng), {});
    roundtrip = std::max(roundtrip, l2_distance(sb_inverse(sb_transform(psi, units), g, units), psi));
  }
  t.at_most("roundtrip L2", roundtrip, 1e-8);

  const SBFunction ground = sb_transform(hermite_state(g, 0), units);
  double off = std::abs(ground.coeffs[0] - 1.0);
  for (std::size_t n = 1; n < ground.coeffs.size(); ++n) off = std::max(off, std::abs(ground.coeffs[n]));
  t.at_most("ground state - 1", off, 1e-10);

  double adjoint = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto f = random_sb(64, 60, rng), h = random_sb(64, 60, rng);
    const cplx lhs = sb_inner(sb_apply(SbOperator::Annihilate, f), h);
    const cplx rhs = sb_inner(f, sb_apply(SbOperator::Create, h, Truncation::Drop));
    adjoint = std::max(adjoint, std::abs(lhs - rhs));
  }
  t.at_most("<df|g> - <f|zg>", adjoint, 1e-10);
  return t.done();
}

Outcome husimi_two_paths() {
  Tally t;
  const SbScaling units{};
  const PhaseGrid g = PhaseGrid::line(-10.0, 10.0, 80);
  const PlaneGrid plane = PlaneGrid::matching(g, units);
  std::vector<WaveFunction> states = {hermite_state(g, 0), hermite_state(g, 1), hermite_state(g, 2), hermite_state(g, 3)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.2, 1.2), w(0.8, 1.25);
  while (states.size() < 10) states.push_back(make_gaussian_packet(g, u(rng), u(rng), w(rng), {}));
  double gap = 0.0, lowest = 1e300;
  for (const auto& psi : states) {
    const auto from_w = husimi_from_wigner(wigner_from_position(psi), plane, units);
    const auto from_sb = husimi_from_sb(sb_transform(psi, units), plane);
    for (std::size_t i = 0; i < from_w.values.size(); ++i) gap = std::max(gap, std::abs(from_w.values[i] - from_sb.values[i]));
    lowest = std::min({lowest, from_w.min(), from_sb.min()});
  }
  t.at_most("Linf gap", gap, 1e-6);
  t.at_least("min H", lowest, -1e-12);
  return t.done();
}

GaugeWorldline worldline(std::function<double(double)> a, std::function<double(double)> phi, std::vector<double> x,
                         std::vector<double> tt) {
  GaugeWorldline w;
  w.x = std::move(x);
  w.t = std::move(tt);
  w.vector_potential = std::move(a);
  w.scalar_potential = std::move(phi);
  return w;
}

GaugeFunction random_gauge(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c1 = u(rng), k = 0.8 * u(rng), w = 2.0 * u(rng), c2 = 0.3 * u(rng), c3 = u(rng);
  GaugeFunction g;
  g.value = [=](double x, double t) { return c1 * std::sin(k * x + w * t) + c2 * x * t + c3 * t * t; };
  g.d_x = [=](double x, double t) { return c1 * k * std::cos(k * x + w * t) + c2 * t; };
  g.d_t = [=](double x, double t) { return c1 * w * std::cos(k * x + w * t) + c2 * x + 2.0 * c3 * t; };
  return g;
}

Outcome gauge_battery() {
  Tally t;
  const ElectricScenario s = electric_with_phase(2.2);
  std::mt19937_64 rng(20241016);
  double invariance = 0.0;
  for (int i = 0; i < 10; ++i) invariance = std::max(invariance, gauge_transform_check(s, random_gauge(rng), {4, 0.5, 0}));
  t.at_most("gauge-transformed P", invariance, 1e-10);

  const PhaseGrid g = PhaseGrid::line(-16.0, 16.0, 256);
  auto bumpy = [](double x) { return 0.4 + 0.3 * std::sin(0.5 * x) + 0.1 * std::cos(0.8 * x); };
  const auto w = worldline(bumpy, [](double) { return 0.0; }, {0.0, 1.0}, {0.0, 0.0});
  const auto a = make_gaussian_packet(g, 0.5, 1.0, 1.0, {});
  const auto b = make_gaussian_packet(g, -0.8, -0.5, 1.1, {});
  const SbScaling units{};
  const double inter = std::max({intertwining_residual(a, w), intertwining_residual(cross_wigner(a, b), w),
                                 intertwining_residual(sb_transform(a, units), w, units)});
  t.at_most("intertwining", inter, 1e-8);

  const double radius = 1.3, field = 1.7, core = 0.5;
  std::vector<double> arc(257);
  for (std::size_t i = 0; i < arc.size(); ++i) arc[i] = 2.0 * kPi * radius * static_cast<double>(i) / 256.0;
  const auto loop = worldline([=](double) { return core * core * field / (2.0 * radius); }, [](double) { return 0.0; }, arc,
                              std::vector<double>(arc.size(), 0.0));
  t.at_most("loop phase - q pi a^2 B", std::abs(gauge_phase(loop) - kPi * core * core * field), 1e-8);
  return t.done();
}

Outcome free_evolution() {
  Tally t;
  const PhaseGrid g = PhaseGrid::line(-20.0, 20.0, 256);
  const double q0 = -2.0, p0 = 1.5, time = 1.0;
  const auto w0 = wigner_from_position(make_gaussian_packet(g, q0, p0, 1.0, {}));
  const HamiltonianSpec h = HamiltonianSpec::free_particle(1.0);
  const double dt = stability_bound(CrossWignerField{g, {w0.values.begin(), w0.values.end()}}, h, h);
  const auto w = evolve_wigner(w0, h, time, {dt, true});
  const auto exact = sample_symbol(g, [&](double q, double p) {
    return std::exp(-(q - p * time - q0) * (q - p * time - q0) - (p - p0) * (p - p0)) / kPi;
  });
  double gap = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) gap = std::max(gap, std::abs(w.values[i] - exact[i]));
  t.at_most("max |W - sheared W0|", gap, 1e-6);
  t.at_most("trace drift", std::abs(w.integral() - w0.integral()), 1e-8);
  return t.done();
}

struct Criterion {
  const char* title;
  double seconds;  // 0: no runtime bound
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"electric detection ratio matches the closed form", 10.0, electric_closed_form},
      {"magnetic phase matches the closed form", 10.0, magnetic_phase},
      {"Wigner battery on random packets", 30.0, wigner_battery},
      {"star product agrees with the operator oracle", 0.0, star_oracle},
      {"Moyal bracket classical limit is second order", 0.0, classical_limit},
      {"Segal-Bargmann battery", 0.0, sb_battery},
      {"Husimi function by two routes", 0.0, husimi_two_paths},
      {"gauge invariance and the phase operator", 0.0, gauge_battery},
      {"free evolution is the classical shear", 0.0, free_evolution},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = std::to_string(secs).substr(0, 5) + " s";
    if (c.seconds > 0.0) {
      const bool in_time = secs <= c.seconds;
      out.pass = out.pass && in_time;
      timing += in_time ? " <= " : " > ";
      timing += std::to_string(static_cast<int>(c.seconds)) + " s";
    }
    if (!out.pass) ++failed;
    std::printf("%s %zu %s [%s] (%s)\n", out.pass ? "PASS" : "FAIL", i + 1, c.title, timing.c_str(), out.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
