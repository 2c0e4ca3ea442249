#include "phasespace/moyal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/fourier.hpp"
#include "phasespace/kernels.hpp"
#include "phasespace/numerics.hpp"

namespace phasespace {

namespace {

constexpr double kBandLimit = 1e-8;
constexpr int kMaxPolyDegree = 12;

std::size_t outer_band(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.005 * static_cast<double>(n))));
}

long signed_index(std::size_t i, std::size_t n) {
  return (2 * i >= n) ? static_cast<long>(i) - static_cast<long>(n) : static_cast<long>(i);
}

// Two-dimensional spectrum of a field with spectral partial derivatives.
class Spectrum {
 public:
  Spectrum(const PhaseGrid& g, std::vector<cplx> values)
      : grid_(g),
        hat_(std::move(values)),
        kq_(fourier::angular_frequencies(g.n_q(), g.dq())),
        kp_(fourier::angular_frequencies(g.n_p(), g.dp())) {
    fourier::fft2(hat_, g.n_q(), g.n_p(), fourier::Direction::Forward);
  }

  /// d^a/dq^a d^b/dp^b of the field. Odd orders drop the Nyquist mode, whose
  /// derivative is not representable on the grid.
  std::vector<cplx> derivative(int a, int b) const {
    const std::size_t nq = grid_.n_q(), np = grid_.n_p();
    std::vector<cplx> out = hat_;
    if (a == 0 && b == 0) {
      fourier::fft2(out, nq, np, fourier::Direction::Backward);
      kernels::cscale(out, 1.0 / static_cast<double>(nq * np));
      return out;
    }
    std::vector<cplx> fq(nq), fp(np);
    for (std::size_t j = 0; j < nq; ++j)
      fq[j] = (a % 2 == 1 && j == nq / 2) ? cplx(0.0, 0.0) : std::pow(cplx(0.0, kq_[j]), a);
    for (std::size_t k = 0; k < np; ++k)
      fp[k] = (b % 2 == 1 && k == np / 2) ? cplx(0.0, 0.0) : std::pow(cplx(0.0, kp_[k]), b);
    for (std::size_t j = 0; j < nq; ++j)
      for (std::size_t k = 0; k < np; ++k) out[j * np + k] *= fq[j] * fp[k];
    fourier::fft2(out, nq, np, fourier::Direction::Backward);
    kernels::cscale(out, 1.0 / static_cast<double>(nq * np));
    return out;
  }

 private:
  PhaseGrid grid_;
  std::vector<cplx> hat_;
  std::vector<double> kq_, kp_;
};

PolySymbol bopp_q(const PolySymbol& f, double hbar) {
  return PolySymbol::q() * f + f.d_p() * cplx(0.0, 0.5 * hbar);
}

PolySymbol bopp_p(const PolySymbol& f, double hbar) {
  return PolySymbol::p() * f - f.d_q() * cplx(0.0, 0.5 * hbar);
}

PolySymbol apply_q(PolySymbol f, int times, double hbar) {
  for (int i = 0; i < times; ++i) f = bopp_q(f, hbar);
  return f;
}

PolySymbol apply_p(PolySymbol f, int times, double hbar) {
  for (int i = 0; i < times; ++i) f = bopp_p(f, hbar);
  return f;
}

// Coefficient of the order-n bidifferential term: (i hbar / 2)^n / n!.
cplx series_weight(int n, double hbar) {
  return std::pow(cplx(0.0, 0.5 * hbar), n) / std::exp(numerics::log_factorial(static_cast<std::size_t>(n)));
}

}  // namespace

GridSymbol::GridSymbol(PhaseGrid grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.n_q() * grid_.n_p()) throw Error(ErrorCode::GridMismatch, "sample count does not match grid");
  if (outer_band_fraction(grid_, values_) >= kBandLimit)
    throw Error(ErrorCode::BandwidthExceeded, "symbol carries spectral energy next to the Nyquist limit");
}

GridSymbol GridSymbol::from_field(const WignerField& w) {
  std::vector<cplx> v(w.values.begin(), w.values.end());
  return GridSymbol(w.grid, std::move(v));
}

GridSymbol GridSymbol::from_field(const CrossWignerField& w) { return GridSymbol(w.grid, w.values); }

double GridSymbol::outer_band_fraction(const PhaseGrid& g, const std::vector<cplx>& values) {
  std::vector<cplx> hat = values;
  fourier::fft2(hat, g.n_q(), g.n_p(), fourier::Direction::Forward);
  const long edge_q = static_cast<long>(g.n_q() / 2 - outer_band(g.n_q()));
  const long edge_p = static_cast<long>(g.n_p() / 2 - outer_band(g.n_p()));
  double total = 0.0, outer = 0.0;
  for (std::size_t j = 0; j < g.n_q(); ++j)
    for (std::size_t k = 0; k < g.n_p(); ++k) {
      const double e = std::norm(hat[j * g.n_p() + k]);
      total += e;
      if (std::abs(signed_index(j, g.n_q())) >= edge_q || std::abs(signed_index(k, g.n_p())) >= edge_p) outer += e;
    }
  return total > 0.0 ? outer / total : 0.0;
}

PolySymbol star_poly(const PolySymbol& a, const PolySymbol& b, double hbar) {
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  if (std::max(a.degree(), 0) + std::max(b.degree(), 0) > kMaxPolyDegree)
    throw Error(ErrorCode::DegreeOverflow, "star_poly supports total degree up to 12");
  PolySymbol out;
  // Weyl-ordered q^m p^n = 2^-m sum_k C(m, k) Q^k P^n Q^(m-k), with Bopp operators.
  for (const auto& [mono, c] : a.terms()) {
    const auto [m, n] = mono;
    PolySymbol acc;
    for (int k = 0; k <= m; ++k) {
      const PolySymbol inner = apply_p(apply_q(b, m - k, hbar), n, hbar);
      acc += apply_q(inner, k, hbar) * cplx(numerics::binomial(m, k), 0.0);
    }
    out += acc * (c * std::ldexp(1.0, -m));
  }
  return out;
}

PolySymbol moyal_bracket(const PolySymbol& a, const PolySymbol& b, double hbar) {
  return star_poly(a, b, hbar) - star_poly(b, a, hbar);
}

PolySymbol poisson_bracket(const PolySymbol& a, const PolySymbol& b) { return a.d_q() * b.d_p() - a.d_p() * b.d_q(); }

GridSymbol star_grid(const GridSymbol& a, const GridSymbol& b) {
  if (!a.grid().same_as(b.grid())) throw Error(ErrorCode::GridMismatch, "star product operands live on different grids");
  const PhaseGrid& g = a.grid();
  const double hbar = g.hbar();
  const std::size_t nq = g.n_q(), np = g.n_p();
  std::vector<cplx> ha = a.values(), hb = b.values();
  fourier::fft2(ha, nq, np, fourier::Direction::Forward);
  fourier::fft2(hb, nq, np, fourier::Direction::Forward);
  const std::vector<double> kq = fourier::angular_frequencies(nq, g.dq());
  const std::vector<double> kp = fourier::angular_frequencies(np, g.dp());

  // Modes below this fraction of the peak cannot move the result: the twist has unit modulus.
  auto peak_of = [](const std::vector<cplx>& hat) {
    double peak = 0.0;
    for (const cplx& v : hat) peak = std::max(peak, std::abs(v));
    return peak;
  };
  const double floor_a = 1e-18 * peak_of(ha), floor_b = 1e-18 * peak_of(hb);

  // B reordered so signed indices run -n/2 .. n/2 - 1 along both axes.
  const long hq = static_cast<long>(nq / 2), hp = static_cast<long>(np / 2);
  std::vector<cplx> centred(nq * np);
  std::vector<char> row_live(nq, 0);
  for (std::size_t r = 0; r < nq; ++r)
    for (std::size_t c = 0; c < np; ++c) {
      const std::size_t j = (r + nq - nq / 2) % nq, k = (c + np - np / 2) % np;
      centred[r * np + c] = hb[j * np + k];
      if (std::abs(hb[j * np + k]) > floor_b) row_live[r] = 1;
    }

  // Plane waves combine as e^{i k z} * e^{i l z} = e^{i (k + l) z} e^{-i hbar/2 (k_q l_p - k_p l_q)}.
  // Sums k + l span twice the band, so accumulate on a doubled index range.
  const long wq = 2 * static_cast<long>(nq), wp = 2 * static_cast<long>(np);
  std::vector<cplx> wide(static_cast<std::size_t>(wq * wp), cplx(0.0, 0.0));
  const double dkq = kq[1], dkp = kp[1];
  std::vector<cplx> twisted(np);  // phase along l_p for the current mode of A
  for (std::size_t j = 0; j < nq; ++j)
    for (std::size_t k = 0; k < np; ++k) {
      const cplx x = ha[j * np + k];
      if (std::abs(x) <= floor_a) continue;
      const long iq = signed_index(j, nq), ip = signed_index(k, np);
      const double tq = -0.5 * hbar * dkq * dkp * static_cast<double>(iq);
      const double tp = 0.5 * hbar * dkq * dkp * static_cast<double>(ip);
      for (std::size_t c = 0; c < np; ++c) twisted[c] = std::polar(1.0, tq * static_cast<double>(static_cast<long>(c) - hp));
      for (std::size_t r = 0; r < nq; ++r) {
        if (!row_live[r]) continue;
        const long lq = static_cast<long>(r) - hq;
        const cplx f = x * std::polar(1.0, tp * static_cast<double>(lq));
        const double fr = f.real(), fi = f.imag();
        cplx* out = wide.data() + (iq + lq + static_cast<long>(nq)) * wp + (ip - hp + static_cast<long>(np));
        const cplx* in = centred.data() + r * np;
        for (std::size_t c = 0; c < np; ++c) {
          const cplx ph = twisted[c];
          const double br = in[c].real() * ph.real() - in[c].imag() * ph.imag();
          const double bi = in[c].real() * ph.imag() + in[c].imag() * ph.real();
          out[c] += cplx(fr * br - fi * bi, fr * bi + fi * br);
        }
      }
    }

  std::vector<cplx> hat(nq * np, cplx(0.0, 0.0));
  double total = 0.0, spilled = 0.0;
  for (long oq = 0; oq < wq; ++oq)
    for (long op = 0; op < wp; ++op) {
      const cplx v = wide[static_cast<std::size_t>(oq * wp + op)];
      const double e = std::norm(v);
      total += e;
      const long sq = oq - static_cast<long>(nq), sp = op - static_cast<long>(np);
      if (sq < -hq || sq >= hq || sp < -hp || sp >= hp) {
        spilled += e;
        continue;
      }
      hat[static_cast<std::size_t>(((sq + static_cast<long>(nq)) % static_cast<long>(nq)) * static_cast<long>(np) +
                                   (sp + static_cast<long>(np)) % static_cast<long>(np))] = v;
    }
  if (total > 0.0 && spilled / total >= kBandLimit)
    throw Error(ErrorCode::BandwidthExceeded, "star product spreads past the Nyquist limit");
  fourier::fft2(hat, nq, np, fourier::Direction::Backward);
  kernels::cscale(hat, 1.0 / static_cast<double>(nq * np * nq * np));
  return GridSymbol(g, std::move(hat));
}

GridSymbol moyal_bracket(const GridSymbol& a, const GridSymbol& b) {
  const GridSymbol ab = star_grid(a, b);
  const GridSymbol ba = star_grid(b, a);
  std::vector<cplx> v = ab.values();
  kernels::caxpy(v, cplx(-1.0, 0.0), ba.values());
  return GridSymbol(a.grid(), std::move(v));
}

CrossWignerField star_poly_grid(const PolySymbol& h, const CrossWignerField& w, Side side) {
  const PhaseGrid& g = w.grid;
  const double hbar = g.hbar();
  const int degree = std::max(h.degree(), 0);
  std::unique_ptr<Spectrum> spec;
  auto field_derivative = [&](int a, int b) {
    if (a == 0 && b == 0) return w.values;
    if (!spec) spec = std::make_unique<Spectrum>(g, w.values);
    return spec->derivative(a, b);
  };
  CrossWignerField out{g, std::vector<cplx>(w.values.size(), cplx(0.0, 0.0))};
  for (int n = 0; n <= degree; ++n) {
    const cplx weight = series_weight(n, hbar);
    for (int j = 0; j <= n; ++j) {
      // Left:  (d_q^(n-j) d_p^j H)(d_q^j d_p^(n-j) W) (-1)^j
      // Right: (d_q^(n-j) d_p^j W)(d_q^j d_p^(n-j) H) (-1)^j
      const PolySymbol dh = (side == Side::Left) ? h.d_q(n - j).d_p(j) : h.d_q(j).d_p(n - j);
      if (dh.is_zero()) continue;
      std::vector<cplx> dw = (side == Side::Left) ? field_derivative(j, n - j) : field_derivative(n - j, j);
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const cplx scale = weight * sign * numerics::binomial(n, j);
      for (std::size_t jj = 0; jj < g.n_q(); ++jj)
        for (std::size_t k = 0; k < g.n_p(); ++k) {
          const std::size_t idx = jj * g.n_p() + k;
          out.values[idx] += scale * dh(g.q(jj), g.p(k)) * dw[idx];
        }
    }
  }
  return out;
}

double stargen_residual(const PolySymbol& h, const CrossWignerField& w, double energy, Side side) {
  CrossWignerField hw = star_poly_grid(h, w, side);
  kernels::caxpy(hw.values, cplx(-energy, 0.0), w.values);
  const double base = kernels::norm2(w.values);
  if (!(base > 0.0)) throw Error(ErrorCode::InvalidArgument, "residual of a zero field");
  return std::sqrt(kernels::norm2(hw.values) / base);
}

double stargen_residual(const PolySymbol& h, const WignerField& w, double energy, Side side) {
  return stargen_residual(h, CrossWignerField{w.grid, std::vector<cplx>(w.values.begin(), w.values.end())}, energy,
                          side);
}

PolySymbol hamiltonian_symbol(const HamiltonianSpec& h, double t) {
  h.validate();
  if (h.has_static_potential())
    throw Error(ErrorCode::InvalidArgument, "a static potential given as a function has no polynomial symbol");
  const PolySymbol kin = PolySymbol::p() - PolySymbol::constant(h.charge * h.vector_potential);
  return kin * kin * cplx(0.5 / h.mass, 0.0) + PolySymbol::constant(h.charge * h.phi_at(t));
}

std::vector<double> classical_limit_probe(const PolySymbol& a, const PolySymbol& b,
                                          const std::vector<double>& hbar_sequence) {
  const PolySymbol classical = poisson_bracket(a, b);
  std::vector<double> out;
  out.reserve(hbar_sequence.size());
  for (double hbar : hbar_sequence) {
    const PolySymbol quantum = moyal_bracket(a, b, hbar) * cplx(0.0, -1.0 / hbar);
    out.push_back(distance(quantum, classical));
  }
  return out;
}

namespace {

constexpr double kRowMassFloor = 1e-12;
constexpr double kNormDriftPerTime = 1e-6;

double l2(const std::vector<cplx>& v) { return std::sqrt(kernels::norm2(v)); }

// Exact kinetic step: Fourier in q, then each (k, p) mode picks up
// exp(-i [T_l(p + hbar k / 2) - T_r(p - hbar k / 2)] tau / hbar).
void kinetic_step(std::vector<cplx>& w, const PhaseGrid& g, const HamiltonianSpec& left, const HamiltonianSpec& right,
                  double tau) {
  const std::size_t nq = g.n_q(), np = g.n_p();
  const double hbar = g.hbar();
  const auto kq = fourier::angular_frequencies(nq, g.dq());
  fourier::fft_cols(w, nq, np, fourier::Direction::Forward);
  for (std::size_t m = 0; m < nq; ++m) {
    const double shift = 0.5 * hbar * kq[m];
    for (std::size_t k = 0; k < np; ++k) {
      const double p = g.p(k);
      const double delta = left.kinetic(p + shift) - right.kinetic(p - shift);
      w[m * np + k] *= std::polar(1.0 / static_cast<double>(nq), -delta * tau / hbar);
    }
  }
  fourier::fft_cols(w, nq, np, fourier::Direction::Backward);
}

// Exact potential step: Fourier in p, then each (q, lambda) mode picks up
// exp(-i [V_l(q - hbar lambda / 2) - V_r(q + hbar lambda / 2)] tau / hbar).
void potential_step(std::vector<cplx>& w, const PhaseGrid& g, const HamiltonianSpec& left,
                    const HamiltonianSpec& right, double t, double tau) {
  const std::size_t nq = g.n_q(), np = g.n_p();
  const double hbar = g.hbar();
  const auto lam = fourier::angular_frequencies(np, g.dp());
  fourier::fft_rows(w, nq, np, fourier::Direction::Forward);
  for (std::size_t j = 0; j < nq; ++j) {
    const double q = g.q(j);
    for (std::size_t m = 0; m < np; ++m) {
      const double shift = 0.5 * hbar * lam[m];
      const double delta = left.potential(q - shift, t) - right.potential(q + shift, t);
      w[j * np + m] *= std::polar(1.0 / static_cast<double>(np), -delta * tau / hbar);
    }
  }
  fourier::fft_rows(w, nq, np, fourier::Direction::Backward);
}

}  // namespace

double stability_bound(const CrossWignerField& w, const HamiltonianSpec& left, const HamiltonianSpec& right) {
  const PhaseGrid& g = w.grid;
  std::vector<double> mass(g.n_p(), 0.0);
  for (std::size_t j = 0; j < g.n_q(); ++j)
    for (std::size_t k = 0; k < g.n_p(); ++k) mass[k] += std::abs(w.values[j * g.n_p() + k]);
  const double peak = *std::max_element(mass.begin(), mass.end());
  double p_max = 0.0;
  for (std::size_t k = 0; k < g.n_p(); ++k)
    if (mass[k] > kRowMassFloor * peak) p_max = std::max(p_max, std::abs(g.p(k)));
  const double inf = std::numeric_limits<double>::infinity();
  const double kinetic = p_max > 0.0 ? g.dq() * std::min(left.mass, right.mass) / p_max : inf;
  const double phi = std::max(left.max_abs_charge_phi(), right.max_abs_charge_phi());
  const double potential = phi > 0.0 ? g.hbar() / phi : inf;
  return 0.1 * std::min(kinetic, potential);
}

CrossWignerField evolve_wigner(const CrossWignerField& w0, const HamiltonianSpec& left, const HamiltonianSpec& right,
                               double t_final, const EvolutionOptions& opts) {
  left.validate();
  right.validate();
  if (!(t_final >= 0.0) || !(opts.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "invalid time span or step");
  const PhaseGrid& g = w0.grid;
  g.require_reciprocal();
  if (opts.enforce_bound && opts.dt > stability_bound(w0, left, right) * (1.0 + 1e-12))
    throw Error(ErrorCode::StabilityViolation, "time step exceeds the stability bound");

  std::vector<double> cuts = left.switch_times(0.0, t_final);
  for (double t : right.switch_times(0.0, t_final)) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(t_final);

  const bool local = left.has_static_potential() || right.has_static_potential();
  const double hbar = g.hbar();
  std::vector<cplx> w = w0.values;
  double t0 = 0.0;
  for (double t1 : cuts) {
    const double span = t1 - t0;
    if (span <= 0.0) continue;
    if (!local) {
      // Uniform potentials commute with the kinetic shear: the whole segment is
      // one exact kinetic step times a phase.
      kinetic_step(w, g, left, right, span);
      const double delta = left.potential(0.0, t0) - right.potential(0.0, t0);
      const cplx phase = std::polar(1.0, -delta * span / hbar);
      for (auto& v : w) v *= phase;
    } else {
      const auto steps = static_cast<std::size_t>(std::ceil(span / opts.dt - 1e-9));
      const double tau = span / static_cast<double>(std::max<std::size_t>(steps, 1));
      for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) {
        potential_step(w, g, left, right, t0, 0.5 * tau);
        kinetic_step(w, g, left, right, tau);
        potential_step(w, g, left, right, t0, 0.5 * tau);
      }
    }
    t0 = t1;
  }

  const double before = l2(w0.values), after = l2(w);
  if (t_final > 0.0 && before > 0.0 && std::abs(after - before) / before > kNormDriftPerTime * t_final)
    throw Error(ErrorCode::StabilityViolation, "field norm drifted during evolution");
  return {g, std::move(w)};
}

CrossWignerField evolve_wigner(const CrossWignerField& w0, const HamiltonianSpec& h, double t_final,
                               const EvolutionOptions& opts) {
  return evolve_wigner(w0, h, h, t_final, opts);
}

WignerField evolve_wigner(const WignerField& w0, const HamiltonianSpec& h, double t_final, const EvolutionOptions& opts) {
  const CrossWignerField c{w0.grid, std::vector<cplx>(w0.values.begin(), w0.values.end())};
  return evolve_wigner(c, h, t_final, opts).real_part();
}

}  // namespace phasespace
