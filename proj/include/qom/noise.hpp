#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>

#include "qom/grid.hpp"
#include "qom/params.hpp"
#include "qom/spectral.hpp"
#include "qom/steady_state.hpp"

namespace qom {

// S_m,th(ω) = (γ_m/ω_m) ω [1 + coth(ħω / 2k_B T)], units rad/s.
// Finite for all ω; T = 0 gives the zero-point part only.
inline double thermal_spectrum(const SystemParams& p, double omega, double temperature) {
  const double scale = p.gamma_m / p.omega_m;
  if (temperature == 0.0) return omega > 0.0 ? 2.0 * scale * omega : 0.0;
  constexpr double hbar = PhysicalConstants::hbar, kb = PhysicalConstants::k_B;
  if (omega == 0.0) return 2.0 * p.gamma_m * kb * temperature / (hbar * p.omega_m);
  const double x = hbar * omega / (2.0 * kb * temperature);
  if (std::abs(x) < 1e-6) return scale * omega * (1.0 + 1.0 / x + x / 3.0);
  // 1 + coth(x) = -2 / expm1(-2x); exact in both tails.
  return scale * (-2.0 * omega / std::expm1(-2.0 * x));
}

// Radiation-pressure noise from the optical vacuum: a Lorentzian of half-width
// γ_c/2 centred at 2gQ_s², identically zero below threshold.
inline double radiation_spectrum(const SystemParams& p, const SteadyState& s, double omega) {
  const double shift = 2.0 * p.g * s.q_s2;
  const double half = 0.5 * p.gamma_c;
  const double num = 16.0 * p.g * p.g * s.q_s2 * s.intensity() * p.gamma_c;
  return num / (half * half + (shift - omega) * (shift - omega));
}

// S_qq(ω) = |χ(ω)|² [S_m,th(ω) + S_c,vac(ω)], units s. +inf at the CP divergence.
inline double psd(const SystemParams& p, const SteadyState& s, double omega, double temperature,
                  ChiMode mode = ChiMode::Exact) {
  const cplx chi = susceptibility(p, s, omega, mode);
  if (std::isinf(chi.real())) return std::numeric_limits<double>::infinity();
  return std::norm(chi) * (thermal_spectrum(p, omega, temperature) + radiation_spectrum(p, s, omega));
}

inline ComplexSpectrum susceptibility_series(const SystemParams& p, const SteadyState& s,
                                             std::span<const double> grid,
                                             ChiMode mode = ChiMode::Exact) {
  ComplexSpectrum out{{grid.begin(), grid.end()}, {}, SpectrumKind::Chi, "s"};
  out.values.reserve(grid.size());
  for (double w : grid) out.values.push_back(susceptibility(p, s, w, mode));
  out.check();
  return out;
}

inline RealSpectrum thermal_series(const SystemParams& p, std::span<const double> grid,
                                   double temperature) {
  RealSpectrum out{{grid.begin(), grid.end()}, {}, SpectrumKind::ThermalNoise, "rad/s"};
  for (double w : grid) out.values.push_back(thermal_spectrum(p, w, temperature));
  out.check();
  return out;
}

inline RealSpectrum radiation_series(const SystemParams& p, const SteadyState& s,
                                     std::span<const double> grid) {
  RealSpectrum out{{grid.begin(), grid.end()}, {}, SpectrumKind::RadiationNoise, "rad/s"};
  for (double w : grid) out.values.push_back(radiation_spectrum(p, s, w));
  out.check();
  return out;
}

inline RealSpectrum psd_series(const SystemParams& p, const SteadyState& s,
                               std::span<const double> grid, double temperature,
                               ChiMode mode = ChiMode::Exact) {
  RealSpectrum out{{grid.begin(), grid.end()}, {}, SpectrumKind::Psd, "s"};
  for (double w : grid) out.values.push_back(psd(p, s, w, temperature, mode));
  out.check();
  return out;
}

}  // namespace qom
