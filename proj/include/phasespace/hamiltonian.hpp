#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "phasespace/error.hpp"

namespace phasespace {

/// phi(t) = value for t >= t_start, until the next segment begins.
struct PotentialSegment {
  double t_start = 0.0;
  double phi = 0.0;
};

/// H = (p - charge * A)^2 / (2 mass) + charge * phi(t) + V(q).
///
/// The vector potential is static and uniform along the coordinate; a
/// position-dependent A in one dimension is a pure gauge and is handled by the
/// phase operator instead. phi(t) is piecewise constant in time.
struct HamiltonianSpec {
  double mass = 1.0;
  double charge = 1.0;
  double vector_potential = 0.0;
  std::vector<PotentialSegment> scalar_potential;
  std::function<double(double)> static_potential;

  static HamiltonianSpec free_particle(double mass) {
    HamiltonianSpec h;
    h.mass = mass;
    return h;
  }

  static HamiltonianSpec oscillator(double mass, double omega) {
    HamiltonianSpec h;
    h.mass = mass;
    h.static_potential = [mass, omega](double q) { return 0.5 * mass * omega * omega * q * q; };
    return h;
  }

  static HamiltonianSpec constant_potential(double mass, double charge, double phi) {
    HamiltonianSpec h;
    h.mass = mass;
    h.charge = charge;
    h.scalar_potential = {{0.0, phi}};
    return h;
  }

  void validate() const {
    if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
    for (std::size_t i = 1; i < scalar_potential.size(); ++i)
      if (scalar_potential[i].t_start <= scalar_potential[i - 1].t_start)
        throw Error(ErrorCode::InvalidArgument, "potential segments must be strictly increasing in time");
  }

  double kinetic(double p) const {
    const double kin = p - charge * vector_potential;
    return kin * kin / (2.0 * mass);
  }

  double phi_at(double t) const {
    double value = 0.0;
    for (const auto& seg : scalar_potential)
      if (t >= seg.t_start) value = seg.phi;
    return value;
  }

  /// Potential energy at (q, t) from both the static and the scalar part.
  double potential(double q, double t) const {
    return charge * phi_at(t) + (static_potential ? static_potential(q) : 0.0);
  }

  bool has_static_potential() const { return static_cast<bool>(static_potential); }

  /// Switch times strictly inside (t0, t1), in increasing order.
  std::vector<double> switch_times(double t0, double t1) const {
    std::vector<double> out;
    for (const auto& seg : scalar_potential)
      if (seg.t_start > t0 && seg.t_start < t1) out.push_back(seg.t_start);
    return out;
  }

  double max_abs_charge_phi() const {
    double m = 0.0;
    for (const auto& seg : scalar_potential) m = std::max(m, std::abs(charge * seg.phi));
    return m;
  }
};

}  // namespace phasespace
