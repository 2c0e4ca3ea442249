#pragma once

// Electric and magnetic Aharonov-Bohm set-ups, run in the Wigner and the
// Segal-Bargmann pictures and compared with closed forms, plus the gauge
// machinery (worldline phase, phase operator, gauge invariance).

#include <functional>
#include <string>
#include <vector>

#include "phasespace/bargmann.hpp"
#include "phasespace/moyal.hpp"
#include "phasespace/states.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

enum class Formalism { Wigner, SegalBargmann };

std::string to_string(Formalism f);

/// Sampling of a run: time samples per tau, how far past tau to continue, and
/// how often to keep a frame (0 keeps none).
struct Sampling {
  std::size_t samples_per_tau = 16;
  double run_past_tau = 0.5;
  std::size_t frame_stride = 0;
};

/// Two branches with uniform potentials phi_1, phi_2 switched on during [0, tau].
/// Both start as the same Gaussian packet with kinetic energy E0.
struct ElectricScenario {
  double phi_1 = 0.0;
  double phi_2 = 0.0;
  double tau = 1.0;
  double energy = 4.5;
  /// hbar, mass and the charge q_c.
  PhysicalConstants consts{};
  double packet_center = -3.0;
  double packet_width = 1.0;
  double box_half_width = 16.0;
  std::size_t grid_points = 128;
  /// Coefficients kept by the Segal-Bargmann backend. The packet drifts and
  /// spreads, which pushes its weight to higher orders than the default.
  std::size_t sb_truncation = 128;

  void validate() const;
  double delta_phi() const { return phi_1 - phi_2; }
  double initial_momentum() const;
  /// H_i = P^2 / 2m + charge phi_i on [0, tau], free afterwards.
  HamiltonianSpec branch_hamiltonian(int branch) const;
  PhaseGrid grid() const;
  WaveFunction initial_state() const;

  /// Delta phi = E0 / (2 charge), tau = 2 pi / E0 (phase pi).
  static ElectricScenario destructive(double energy = 4.5, double charge = 1.0);
};

/// Counter-propagating ring modes with momenta +-p0 around a solenoid of
/// radius a carrying field B, switched on during [0, tau].
struct MagneticScenario {
  double solenoid_radius = 0.5;
  double field = 0.0;
  double ring_radius = 1.0;
  double tau = 1.0;
  double momentum = 4.0;
  PhysicalConstants consts{};
  std::size_t grid_points = 32;

  void validate() const;
  /// A = a^2 B / (2 R) along the ring.
  double vector_potential() const;
  /// Integer mode index p0 R / hbar; IncommensurateMomentum otherwise.
  long mode_index() const;
  double energy() const;
  HamiltonianSpec ring_hamiltonian(bool solenoid_on) const;
  PhaseGrid grid() const;

  /// |A| = p0 / (16 charge), tau = 4 pi / E0 (phase pi).
  static MagneticScenario destructive(double ring_radius = 1.0, long index = 4, double solenoid_radius = 0.5,
                                      double charge = 1.0);
};

struct Frame {
  std::size_t index = 0;
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> density;
  std::vector<double> phase;
};

struct ScenarioResult {
  Formalism formalism = Formalism::Wigner;
  std::vector<double> times;
  /// Detection ratio relative to the run without the device.
  std::vector<double> probability;
  /// Interference phase at each time, in (-pi, pi].
  std::vector<double> phase;
  double extracted_phase = 0.0;
  double closed_form_phase = 0.0;
  double probability_at_tau = 0.0;
  std::vector<Frame> frames;
};

/// Reduces an angle to (-pi, pi].
double wrap_phase(double angle);

/// 1/2 [1 + cos(charge Delta phi min(t, tau) / hbar)].
double electric_ab_closed_form(const ElectricScenario& scn, double t);
double electric_phase_closed_form(const ElectricScenario& scn, double t);

/// 2 p0 charge A tau / (m hbar), reduced to (-pi, pi].
double magnetic_phase_closed_form(const MagneticScenario& scn);

/// Branches are evolved separately and recombined; the phase is
/// arg <branch_1 | branch_2>. Admission failures of the chosen picture are
/// reported as FormalismMismatch.
ScenarioResult simulate_electric_ab(const ElectricScenario& scn, Formalism formalism, const Sampling& sampling = {});

/// Phase arg(conj(psi_-) psi_+) and detection ratio of the recombined density,
/// both at s = 0.
ScenarioResult simulate_magnetic_ring(const MagneticScenario& scn, Formalism formalism, const Sampling& sampling = {});

/// Path x(lambda), t(lambda) with potentials A(x) and phi(t).
struct GaugeWorldline {
  std::vector<double> x;
  std::vector<double> t;
  std::function<double(double)> vector_potential;
  std::function<double(double)> scalar_potential;
  double charge = 1.0;

  void validate() const;
};

/// charge [int A dx - int phi dt] / hbar by the trapezoid rule along the path.
double gauge_phase(const GaugeWorldline& w, double hbar = 1.0);

/// Local phase charge [int_{x_0}^{x} A dr - int phi dt] / hbar, with the time
/// integral taken over the whole worldline.
double local_gauge_phase(const GaugeWorldline& w, double x, double hbar);

/// Multiplies by e^{i theta(x)}. On a ring the factor must be single-valued.
WaveFunction apply_phase_operator(const WaveFunction& psi, const GaugeWorldline& w);
/// e^{i theta(Q)} through the eigenbasis of the truncated position matrix.
SBFunction apply_phase_operator(const SBFunction& phi, const GaugeWorldline& w, const SbScaling& units);
/// M |a><b| M^dagger, as a multiplication in the (q, offset) representation.
CrossWignerField apply_phase_operator(const CrossWignerField& w, const GaugeWorldline& g);
/// Always throws UnsupportedState: a diagonal Wigner function carries no phase.
WignerField apply_phase_operator(const WignerField& w, const GaugeWorldline& g);

/// ||(P - charge A) M x - M P x|| / ||P x|| in each representation.
double intertwining_residual(const WaveFunction& psi, const GaugeWorldline& w);
double intertwining_residual(const SBFunction& phi, const GaugeWorldline& w, const SbScaling& units);
double intertwining_residual(const CrossWignerField& field, const GaugeWorldline& w);

/// Gauge function with its partial derivatives.
struct GaugeFunction {
  std::function<double(double, double)> value;  // (x, t)
  std::function<double(double, double)> d_x;
  std::function<double(double, double)> d_t;
};

/// Runs the scenario in the gauge (A + d_x Lambda, phi - d_t Lambda): the branch
/// states are mapped by e^{i charge Lambda / hbar}, and the result is the largest
/// change of the detection ratio over the sampled times.
double gauge_transform_check(const ElectricScenario& scn, const GaugeFunction& lambda, const Sampling& sampling = {});
double gauge_transform_check(const MagneticScenario& scn, const GaugeFunction& lambda, const Sampling& sampling = {});

/// ||i hbar d_t psi' - H' psi'|| / ||H' psi'|| for the mapped first branch at
/// time t, with d_t by a central difference: checks that the mapped states
/// solve the transformed equation.
double gauge_equation_residual(const ElectricScenario& scn, const GaugeFunction& lambda, double t);

}  // namespace phasespace
