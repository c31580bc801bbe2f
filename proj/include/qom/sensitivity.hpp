#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qom/errors.hpp"
#include "qom/noise.hpp"
#include "qom/parallel.hpp"
#include "qom/spectral.hpp"
#include "qom/sweep.hpp"

namespace qom {

// Sensitivities ξ = dS_qq/dT are reported in s/K.

enum class TemperatureLimit { Full, HighT, LowT };
enum class OmegaPolicy { AtZero, AtOmegaEff };

inline std::string_view limit_name(TemperatureLimit l) {
  switch (l) {
    case TemperatureLimit::Full: return "none";
    case TemperatureLimit::HighT: return "high_t";
    case TemperatureLimit::LowT: return "low_t";
  }
  return "none";
}

namespace detail {

// sinh(x)^-2 for x > 0 without overflow.
inline double inv_sinh_sq(double x) {
  const double m = std::expm1(-2.0 * x);
  return 4.0 * std::exp(-2.0 * x) / (m * m);
}

inline void require_positive_temperature(double t) {
  if (!(t > 0.0)) throw DomainError("temperature must be > 0 for this sensitivity");
}

}  // namespace detail

// Central difference of S_qq over T with one Richardson pass.
inline double sensitivity_numeric(const SystemParams& p, const SteadyState& s, double omega,
                                  double temperature, ChiMode mode = ChiMode::Exact) {
  detail::require_positive_temperature(temperature);
  double h = std::max(1e-6 * temperature, 1e-9);
  h = std::min(h, 0.25 * temperature);
  auto slope = [&](double step) {
    return (psd(p, s, omega, temperature + step, mode) - psd(p, s, omega, temperature - step, mode)) /
           (2.0 * step);
  };
  return (4.0 * slope(h) - slope(2.0 * h)) / 3.0;
}

// ξ_S = 2 k_B ω_m γ_m / (ħ |ω_+ ω_-|²); anti-PT-symmetric regime only.
inline double sensitivity_S(const SystemParams& p, const SteadyState& s) {
  if (classify_regime(p) != Regime::AntiPTSymmetric)
    throw RegimeError("xi_S requires the anti-PT-symmetric regime");
  const Eigenfrequencies w = eigenfrequencies(p, s);
  const double prod = std::norm(w.plus * w.minus);
  if (prod == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * PhysicalConstants::k_B * p.omega_m * p.gamma_m / (PhysicalConstants::hbar * prod);
}

// ω_eff = |Re ω_+|.
inline double effective_frequency(const SystemParams& p, const SteadyState& s) {
  return std::abs(eigenfrequencies(p, s).plus.real());
}

// ξ_B, the slope at ω_eff in the anti-PT-broken regimes.
inline double sensitivity_B(const SystemParams& p, const SteadyState& s, double temperature,
                            TemperatureLimit limit = TemperatureLimit::Full,
                            ChiMode mode = ChiMode::Exact) {
  if (!is_broken(classify_regime(p))) throw RegimeError("xi_B requires an anti-PT-broken regime");
  constexpr double hbar = PhysicalConstants::hbar, kb = PhysicalConstants::k_B;
  const double w = effective_frequency(p, s);
  const double chi2 = std::norm(susceptibility(p, s, w, mode));
  if (limit == TemperatureLimit::HighT) return chi2 * 2.0 * kb * p.gamma_m / (hbar * p.omega_m);
  detail::require_positive_temperature(temperature);
  const double kt = kb * temperature;
  if (limit == TemperatureLimit::LowT)
    return chi2 * 2.0 * hbar * w * w * p.gamma_m / (p.omega_m * kt * temperature) *
           std::exp(-hbar * w / kt);
  return chi2 * hbar * w * w * p.gamma_m / (2.0 * p.omega_m * kt * temperature) *
         detail::inv_sinh_sq(hbar * w / (2.0 * kt));
}

// ξ_0, the undriven resonator read out at ω_m.
inline double sensitivity_0(const SystemParams& p, double temperature,
                            TemperatureLimit limit = TemperatureLimit::Full) {
  constexpr double hbar = PhysicalConstants::hbar, kb = PhysicalConstants::k_B;
  if (limit == TemperatureLimit::HighT) return 2.0 * kb / (hbar * p.omega_m * p.gamma_m);
  detail::require_positive_temperature(temperature);
  const double kt = kb * temperature;
  if (limit == TemperatureLimit::LowT)
    return 2.0 * hbar * p.omega_m / (p.gamma_m * kt * temperature) * std::exp(-hbar * p.omega_m / kt);
  return hbar * p.omega_m / (2.0 * p.gamma_m * kt * temperature) *
         detail::inv_sinh_sq(hbar * p.omega_m / (2.0 * kt));
}

struct SensitivityReport {
  double xi_numeric = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> xi_closed_form;
  std::string closed_form;  // "xi_s", "xi_b", "xi_0" or "none"
  Regime regime = Regime::AntiPTBrokenLower;
  double omega_eval = 0.0;
  TemperatureLimit limit_label = TemperatureLimit::Full;
};

namespace detail {

inline TemperatureLimit classify_temperature(double omega, double temperature) {
  const double ratio = PhysicalConstants::k_B * temperature / (PhysicalConstants::hbar * std::abs(omega));
  if (omega == 0.0 || ratio >= 10.0) return TemperatureLimit::HighT;
  if (ratio <= 0.1) return TemperatureLimit::LowT;
  return TemperatureLimit::Full;
}

}  // namespace detail

// Picks the closed form that applies to the regime. ω = 0 in the symmetric
// window (EPs included), ω_eff in the broken ones under AtOmegaEff. An
// exactly undriven system reports ξ_0.
inline SensitivityReport sensitivity_report(const SystemParams& p, double temperature,
                                            OmegaPolicy policy = OmegaPolicy::AtOmegaEff) {
  const SteadyState s = steady_state(p);
  SensitivityReport r;
  r.regime = classify_regime(p);
  const bool undriven = p.drive == Drive::absolute(0.0);
  if (r.regime == Regime::AntiPTSymmetric) {
    r.omega_eval = 0.0;
    r.xi_closed_form = sensitivity_S(p, s);
    r.closed_form = "xi_s";
  } else if (policy == OmegaPolicy::AtOmegaEff) {
    r.omega_eval = effective_frequency(p, s);
    if (undriven) {
      r.xi_closed_form = sensitivity_0(p, temperature);
      r.closed_form = "xi_0";
    } else {
      r.xi_closed_form = sensitivity_B(p, s, temperature);
      r.closed_form = "xi_b";
    }
  } else {
    r.omega_eval = 0.0;
    r.closed_form = "none";
  }
  r.limit_label = detail::classify_temperature(r.omega_eval, temperature);
  r.xi_numeric = sensitivity_numeric(p, s, r.omega_eval, temperature);
  return r;
}

// ξ over a drive × temperature grid. Per-point failures become rows with a
// non-"ok" status and NaN values instead of aborting the sweep.
inline SweepResult sensitivity_sweep(const SystemParams& base, std::span<const Drive> drives,
                                     std::span<const double> temperatures,
                                     OmegaPolicy policy = OmegaPolicy::AtOmegaEff,
                                     unsigned jobs = 1) {
  if (drives.empty() || temperatures.empty())
    throw ValidationError("grid", "drive and temperature grids must be nonempty");
  const std::size_t n = drives.size() * temperatures.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> offset(n, nan), omega_drive(n, nan), temp(n), omega_eval(n, nan),
      closed(n, nan), numeric(n, nan), xi0(n, nan);
  std::vector<std::string> regime(n, "none"), form(n, "none"), limit(n, "none"), status(n, "ok");

  parallel_for(n, jobs, [&](std::size_t k) {
    const Drive d = drives[k / temperatures.size()];
    const double t = temperatures[k % temperatures.size()];
    temp[k] = t;
    try {
      const SystemParams pp = base.with_drive(d).with_temperature(t);
      omega_drive[k] = drive_strength(pp);
      offset[k] = drive_offset(pp) / pp.gamma_m;
      if (t > 0.0) xi0[k] = sensitivity_0(pp, t);
      const SensitivityReport r = sensitivity_report(pp, t, policy);
      regime[k] = regime_name(r.regime);
      omega_eval[k] = r.omega_eval;
      closed[k] = r.xi_closed_form.value_or(nan);
      form[k] = r.closed_form;
      limit[k] = limit_name(r.limit_label);
      numeric[k] = r.xi_numeric;
    } catch (const std::exception& e) {
      status[k] = e.what();
      std::replace(status[k].begin(), status[k].end(), ',', ';');
    }
  });

  SweepResult out;
  out.schema_version = 1;
  out.add("omega_drive_offset_over_gamma_m", offset)
      .add("omega_drive_rad_s", omega_drive)
      .add("temperature_k", temp)
      .add("regime", regime)
      .add("omega_eval_rad_s", omega_eval)
      .add("closed_form", form)
      .add("xi_closed_s_per_k", closed)
      .add("xi_numeric_s_per_k", numeric)
      .add("xi0_s_per_k", xi0)
      .add("temperature_limit", limit)
      .add("status", status);
  return out;
}

}  // namespace qom
