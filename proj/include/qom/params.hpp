#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qom/errors.hpp"

namespace qom {

// CODATA 2018 exact values.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double k_B = 1.380649e-23;      // J/K
};

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Drive coupling strength Ω. Near the critical point the interesting physics
// lives at offsets of order γ_m from Ω_c ~ 1e12 rad/s, far below the
// resolution of an absolute double, so a drive may be pinned to Ω_c instead.
class Drive {
 public:
  enum class Reference { Absolute, Critical };

  constexpr Drive() = default;

  // Ω in rad/s.
  static constexpr Drive absolute(double omega) { return Drive(Reference::Absolute, omega); }
  // Ω = Ω_c + offset, offset in rad/s. Requires g < 0 to resolve.
  static constexpr Drive from_critical(double offset) {
    return Drive(Reference::Critical, offset);
  }

  constexpr Reference reference() const { return reference_; }
  constexpr double value() const { return value_; }

  friend constexpr bool operator==(const Drive&, const Drive&) = default;

 private:
  constexpr Drive(Reference r, double v) : reference_(r), value_(v) {}

  Reference reference_ = Reference::Absolute;
  double value_ = 0.0;
};

// Physical parameters in SI angular units (rad/s). Q and P are dimensionless.
struct SystemParams {
  double g = 0.0;            // quadratic coupling, signed
  double omega_m = 1.0;      // mechanical frequency
  double gamma_m = 1.0;      // mechanical damping
  double gamma_c = 1.0;      // optical damping
  Drive drive{};             // drive coupling strength Ω
  double temperature = 0.0;  // bath temperature, K

  // Throws ValidationError naming the first offending field.
  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(name, "must be finite and > 0");
    };
    if (!std::isfinite(g)) throw ValidationError("g", "must be finite");
    positive(omega_m, "omega_m");
    positive(gamma_m, "gamma_m");
    positive(gamma_c, "gamma_c");
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
      throw ValidationError("temperature", "must be finite and >= 0");
    if (!std::isfinite(drive.value())) throw ValidationError("drive", "must be finite");
    if (drive.reference() == Drive::Reference::Absolute && drive.value() < 0.0)
      throw ValidationError("drive", "Omega must be >= 0");
  }

  SystemParams with_drive(Drive d) const {
    SystemParams p = *this;
    p.drive = d;
    return p;
  }

  SystemParams with_temperature(double t) const {
    SystemParams p = *this;
    p.temperature = t;
    return p;
  }
};

// Soft diagnostics that do not invalidate the parameters.
inline std::vector<std::string> diagnostics(const SystemParams& p) {
  std::vector<std::string> out;
  if (p.gamma_c < 10.0 * p.omega_m)
    out.emplace_back("gamma_c < 10 omega_m: outside the sideband-unresolved regime, zeta0 approximation degrades");
  return out;
}

// Ω_c = sqrt(-γ_c² ω_m / (16 g)).
inline double critical_drive(const SystemParams& p) {
  if (!(p.g < 0.0)) throw DomainError("CP requires negative g");
  return std::sqrt(-p.gamma_c * p.gamma_c * p.omega_m / (16.0 * p.g));
}

// Absolute Ω in rad/s.
inline double drive_strength(const SystemParams& p) {
  if (p.drive.reference() == Drive::Reference::Absolute) return p.drive.value();
  const double omega = critical_drive(p) + p.drive.value();
  if (omega < 0.0) throw ValidationError("drive", "Omega_c + offset must be >= 0");
  return omega;
}

// Ω - Ω_c in rad/s.
inline double drive_offset(const SystemParams& p) {
  if (p.drive.reference() == Drive::Reference::Critical) return p.drive.value();
  return p.drive.value() - critical_drive(p);
}

// Ω²/Ω_c² - 1, evaluated without cancellation near the critical point.
inline double drive_excess(const SystemParams& p) {
  const double oc = critical_drive(p);
  if (p.drive.reference() == Drive::Reference::Critical) {
    const double d = p.drive.value();
    return d * (2.0 * oc + d) / (oc * oc);
  }
  const double o = p.drive.value();
  return (o - oc) * (o + oc) / (oc * oc);
}

// User-facing parameter set in Hz, as quoted by experiments.
struct ExperimentParams {
  double g_hz = 0.0;
  double f_m_hz = 0.0;
  double q_m = 0.0;
  double gamma_c_hz = 0.0;
  // Exactly one of the two drive fields is used; omega_hz wins if both are set.
  std::optional<double> omega_hz;
  std::optional<double> drive_offset_over_gamma_m;
  double temperature_k = 0.0;
};

inline SystemParams params_from_experiment(double g_hz, double f_m, double q_m, double gamma_c_hz,
                                           double omega_hz, double temperature) {
  if (!(f_m > 0.0)) throw ValidationError("f_m_hz", "must be > 0");
  if (!(q_m > 0.0)) throw ValidationError("q_m", "must be > 0");
  if (!(gamma_c_hz > 0.0)) throw ValidationError("gamma_c_hz", "must be > 0");
  SystemParams p;
  p.g = two_pi * g_hz;
  p.omega_m = two_pi * f_m;
  p.gamma_m = p.omega_m / q_m;
  p.gamma_c = two_pi * gamma_c_hz;
  p.drive = Drive::absolute(two_pi * omega_hz);
  p.temperature = temperature;
  p.validate();
  return p;
}

inline SystemParams params_from_experiment(const ExperimentParams& e) {
  SystemParams p = params_from_experiment(e.g_hz, e.f_m_hz, e.q_m, e.gamma_c_hz,
                                          e.omega_hz.value_or(0.0), e.temperature_k);
  if (!e.omega_hz && e.drive_offset_over_gamma_m) {
    p.drive = Drive::from_critical(*e.drive_offset_over_gamma_m * p.gamma_m);
    p.validate();
  }
  return p;
}

inline ExperimentParams to_experiment(const SystemParams& p) {
  ExperimentParams e;
  e.g_hz = p.g / two_pi;
  e.f_m_hz = p.omega_m / two_pi;
  e.q_m = p.omega_m / p.gamma_m;
  e.gamma_c_hz = p.gamma_c / two_pi;
  if (p.drive.reference() == Drive::Reference::Absolute)
    e.omega_hz = p.drive.value() / two_pi;
  else
    e.drive_offset_over_gamma_m = p.drive.value() / p.gamma_m;
  e.temperature_k = p.temperature;
  return e;
}

// g/2π = -245 Hz, ω_m/2π = 8.7 MHz, Q_m = 1e4, γ_c/2π = 5 GHz.
inline SystemParams paper_parameters(Drive drive = Drive::absolute(0.0), double temperature = 300.0) {
  SystemParams p = params_from_experiment(-245.0, 8.7e6, 1e4, 5e9, 0.0, temperature);
  p.drive = drive;
  return p;
}

// Scaled-down set for trajectory integration: ω_m/2π = 1 kHz, γ_c = 50 ω_m,
// Q_m = 100, g = -1e-8 ω_m (large Q_s keeps thermal motion in the linear regime).
inline SystemParams desk_parameters(Drive drive = Drive::absolute(0.0)) {
  SystemParams p;
  p.omega_m = two_pi * 1e3;
  p.gamma_m = p.omega_m / 100.0;
  p.gamma_c = 50.0 * p.omega_m;
  p.g = -1e-8 * p.omega_m;
  p.drive = drive;
  // k_B T = 10 ħ ω_m, the edge of the classical regime.
  p.temperature = 10.0 * PhysicalConstants::hbar * p.omega_m / PhysicalConstants::k_B;
  return p;
}

}  // namespace qom
