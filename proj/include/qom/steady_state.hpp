#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "qom/params.hpp"

namespace qom {

using cplx = std::complex<double>;

enum class Branch { Positive, Negative };

// Mean-field fixed point of the driven QOM system.
struct SteadyState {
  cplx alpha{};                // optical amplitude ⟨A⟩
  double q_s2 = 0.0;           // Q_s²
  double q_s = 0.0;            // chosen displacement branch ±sqrt(Q_s²)
  double p_s = 0.0;            // always 0
  bool above_threshold = false;
  // ω_m + 4g|α|², the optically softened spring. Stored rather than
  // recomputed from alpha: it is exactly 0 above threshold and O(γ_m²/ω_m)
  // near the CP, where recomputation would be dominated by rounding.
  double stiffness = 0.0;

  double intensity() const { return std::norm(alpha); }
};

inline SteadyState steady_state(const SystemParams& p, Branch branch = Branch::Positive) {
  p.validate();
  const double omega = drive_strength(p);
  SteadyState s;
  if (p.g < 0.0) {
    const double e = drive_excess(p);
    if (e > 0.0) {
      // Q_s⁴ = -(1/4g²)[4gΩ²/ω_m + (γ_c/2)²] = γ_c² e / (16 g²)
      s.q_s2 = p.gamma_c * std::sqrt(e) / (4.0 * std::abs(p.g));
      s.above_threshold = true;
      s.stiffness = 0.0;
    } else {
      s.stiffness = -p.omega_m * e;
    }
  } else {
    // g >= 0 admits only the Q_s = 0 fixed point.
    s.stiffness = p.omega_m + 16.0 * p.g * omega * omega / (p.gamma_c * p.gamma_c);
  }
  s.q_s = std::sqrt(s.q_s2);
  if (branch == Branch::Negative) s.q_s = -s.q_s;
  s.alpha = cplx(0.0, -2.0 * omega) / cplx(p.gamma_c, 4.0 * p.g * s.q_s2);
  return s;
}

// Time derivatives of the mean-field equations at a candidate fixed point.
struct FixedPointResidual {
  cplx cavity;      // d⟨A⟩/dt
  double position;  // d⟨Q⟩/dt
  double momentum;  // d⟨P⟩/dt

  // Largest residual relative to max(γ_c, ω_m) times the variable scale.
  double normalized(const SystemParams& p, const SteadyState& s) const {
    const double rate = std::max(p.gamma_c, p.omega_m);
    const double ra = std::abs(cavity) / (rate * std::max(std::abs(s.alpha), 1.0));
    const double rq = std::abs(position) / (rate * std::max(std::abs(s.q_s), 1.0));
    const double rp = std::abs(momentum) / (rate * std::max(std::abs(s.q_s), 1.0));
    return std::max({ra, rq, rp});
  }
};

inline FixedPointResidual fixed_point_residual(const SystemParams& p, const SteadyState& s) {
  const double omega = drive_strength(p);
  const cplx i(0.0, 1.0);
  FixedPointResidual r;
  r.position = p.omega_m * s.p_s;
  r.momentum = -p.omega_m * s.q_s - 4.0 * p.g * std::norm(s.alpha) * s.q_s - p.gamma_m * s.p_s;
  r.cavity = -0.5 * p.gamma_c * s.alpha - 2.0 * i * p.g * s.alpha * s.q_s * s.q_s - i * omega;
  return r;
}

// Cavity amplitude slaved to an instantaneous displacement Q.
inline cplx adiabatic_amplitude(const SystemParams& p, double omega_drive, double q) {
  return cplx(0.0, -2.0 * omega_drive) / cplx(p.gamma_c, 4.0 * p.g * q * q);
}

// dP/dt at (Q, P = 0) with the cavity adiabatically eliminated.
inline double mean_field_force(const SystemParams& p, double q) {
  const double omega = drive_strength(p);
  return -p.omega_m * q - 4.0 * p.g * std::norm(adiabatic_amplitude(p, omega, q)) * q;
}

// V(Q) = ω_m Q²/2 + (2Ω²/γ_c) atan(4gQ²/γ_c), in rad/s (energy / ħ).
// dV/dQ = -mean_field_force.
inline double effective_potential(const SystemParams& p, double q) {
  const double omega = drive_strength(p);
  return 0.5 * p.omega_m * q * q +
         (2.0 * omega * omega / p.gamma_c) * std::atan(4.0 * p.g * q * q / p.gamma_c);
}

}  // namespace qom
