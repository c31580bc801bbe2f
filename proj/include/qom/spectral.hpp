#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string_view>
#include <utility>

#include "qom/errors.hpp"
#include "qom/params.hpp"
#include "qom/steady_state.hpp"

namespace qom {

enum class Regime { AntiPTBrokenLower, AntiPTSymmetric, AntiPTBrokenUpper };

inline std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::AntiPTBrokenLower: return "anti_pt_broken_lower";
    case Regime::AntiPTSymmetric: return "anti_pt_symmetric";
    case Regime::AntiPTBrokenUpper: return "anti_pt_broken_upper";
  }
  return "unknown";
}

inline bool is_broken(Regime r) { return r != Regime::AntiPTSymmetric; }

enum class ChiMode { Exact, Factored };

namespace detail {

// 1 - ζ(ω) = (4gQ_s²)² / [(γ_c/2 - iω)² + (2gQ_s²)²]. Kept separate from ζ
// because near the CP it is ~1e-10 and 1 - ζ would lose it.
inline cplx zeta_deficit(const SystemParams& p, const SteadyState& s, double omega) {
  const double shift = 2.0 * p.g * s.q_s2;
  const double half = 0.5 * p.gamma_c;
  const cplx d = cplx(half, -omega) * cplx(half, -omega) + shift * shift;
  if (std::abs(d) < 1e-12 * half * half)
    throw DegeneracyError("zeta: vanishing denominator (gamma_c/2 - i omega)^2 + (2 g Q_s^2)^2");
  return 4.0 * shift * shift / d;
}

inline double zeta0_deficit(const SystemParams& p, const SteadyState& s) {
  const double shift = 2.0 * p.g * s.q_s2;
  const double half = 0.5 * p.gamma_c;
  return 4.0 * shift * shift / (half * half + shift * shift);
}

inline cplx divergent() { return {std::numeric_limits<double>::infinity(), 0.0}; }

}  // namespace detail

inline cplx zeta(const SystemParams& p, const SteadyState& s, double omega) {
  return 1.0 - detail::zeta_deficit(p, s, omega);
}

inline double zeta0(const SystemParams& p, const SteadyState& s) {
  return 1.0 - detail::zeta0_deficit(p, s);
}

// Transfer of optical input noise onto the mechanical force.
inline cplx eta(const SystemParams& p, const SteadyState& s, double omega) {
  const cplx num = -4.0 * p.g * s.q_s * std::conj(s.alpha) * std::sqrt(p.gamma_c);
  return num / cplx(0.5 * p.gamma_c, 2.0 * p.g * s.q_s2 - omega);
}

struct ExceptionalPoints {
  double omega_ep1 = 0.0;   // rad/s
  double omega_ep2 = 0.0;
  double offset_ep1 = 0.0;  // Ω_EP1 - Ω_c
  double offset_ep2 = 0.0;  // Ω_EP2 - Ω_c
};

// Ω_EP1² = Ω_c²[1 - (γ_m/2ω_m)²],  Ω_EP2² = Ω_c²[1 - (γ_m/4ω_m)²]⁻¹.
inline ExceptionalPoints exceptional_points(const SystemParams& p) {
  const double oc = critical_drive(p);
  if (!(p.gamma_m < 2.0 * p.omega_m)) throw DomainError("EP1 undefined for gamma_m >= 2 omega_m");
  const double e1 = std::pow(p.gamma_m / (2.0 * p.omega_m), 2);
  const double e2 = std::pow(p.gamma_m / (4.0 * p.omega_m), 2);
  const double r1 = std::sqrt(1.0 - e1);
  const double r2 = std::sqrt(1.0 - e2);
  ExceptionalPoints ep;
  ep.omega_ep1 = oc * r1;
  ep.omega_ep2 = oc / r2;
  ep.offset_ep1 = -oc * e1 / (1.0 + r1);
  ep.offset_ep2 = oc * e2 / (r2 * (1.0 + r2));
  return ep;
}

// Closed on the symmetric side.
inline Regime classify_regime(const SystemParams& p) {
  const ExceptionalPoints ep = exceptional_points(p);
  const double d = drive_offset(p);
  if (d < ep.offset_ep1) return Regime::AntiPTBrokenLower;
  if (d > ep.offset_ep2) return Regime::AntiPTBrokenUpper;
  return Regime::AntiPTSymmetric;
}

struct Eigenfrequencies {
  cplx plus;
  cplx minus;
};

// ω_± = -iγ_m/2 ± sqrt(ω_m(ω_m + 4g|α|²ζ₀) - (γ_m/2)²).
// Negative radicand: ω_+ takes the smaller |Im|, so the CP zero lands on ω_+.
// For g < 0 the radicand sign is forced to agree with classify_regime.
inline Eigenfrequencies eigenfrequencies(const SystemParams& p, const SteadyState& s) {
  const double half = 0.5 * p.gamma_m;
  const double spring = s.stiffness - 4.0 * p.g * s.intensity() * detail::zeta0_deficit(p, s);
  double radicand = p.omega_m * spring - half * half;
  if (p.g < 0.0) {
    radicand = classify_regime(p) == Regime::AntiPTSymmetric ? std::min(radicand, 0.0)
                                                              : std::max(radicand, 0.0);
  }
  if (radicand >= 0.0) {
    const double r = std::sqrt(radicand);
    return {cplx(r, -half), cplx(-r, -half)};
  }
  const double r = std::sqrt(-radicand);
  return {cplx(0.0, -(half - r)), cplx(0.0, -(half + r))};
}

// Mechanical susceptibility. An exactly vanishing denominator (the CP at
// ω = 0) yields +inf rather than an exception.
inline cplx susceptibility(const SystemParams& p, const SteadyState& s, double omega,
                           ChiMode mode = ChiMode::Exact) {
  if (mode == ChiMode::Factored) {
    const Eigenfrequencies w = eigenfrequencies(p, s);
    const cplx den = (omega - w.plus) * (omega - w.minus);
    if (den == cplx(0.0, 0.0)) return detail::divergent();
    return -p.omega_m / den;
  }
  // ω_m² + 4ω_m g|α|²ζ = ω_m·stiffness - 4ω_m g|α|²(1 - ζ)
  const cplx den = p.omega_m * s.stiffness - omega * omega - cplx(0.0, p.gamma_m * omega) -
                   4.0 * p.omega_m * p.g * s.intensity() * detail::zeta_deficit(p, s, omega);
  if (den == cplx(0.0, 0.0)) return detail::divergent();
  return p.omega_m / den;
}

struct SpectralStructure {
  cplx omega_plus;
  cplx omega_minus;
  double omega_c_drive = 0.0;
  double omega_ep1 = 0.0;
  double omega_ep2 = 0.0;
  double offset_ep1 = 0.0;
  double offset_ep2 = 0.0;
  Regime regime = Regime::AntiPTBrokenLower;
};

inline SpectralStructure spectral_structure(const SystemParams& p, Branch branch = Branch::Positive) {
  const SteadyState s = steady_state(p, branch);
  const Eigenfrequencies w = eigenfrequencies(p, s);
  const ExceptionalPoints ep = exceptional_points(p);
  return {w.plus,        w.minus,       critical_drive(p), ep.omega_ep1,
          ep.omega_ep2,  ep.offset_ep1, ep.offset_ep2,     classify_regime(p)};
}

struct SusceptibilityPeak {
  double omega = 0.0;
  double abs_chi_sq = 0.0;
};

// max |χ(ω)|² over a grid, refined by golden-section search around the best node.
inline SusceptibilityPeak peak_susceptibility(const SystemParams& p, const SteadyState& s,
                                              std::span<const double> grid,
                                              ChiMode mode = ChiMode::Exact) {
  auto f = [&](double w) { return std::norm(susceptibility(p, s, w, mode)); };
  SusceptibilityPeak best{grid.front(), f(grid.front())};
  std::size_t idx = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best.abs_chi_sq) best = {grid[i], v}, idx = i;
  }
  if (std::isinf(best.abs_chi_sq) || grid.size() < 3) return best;
  double a = grid[idx == 0 ? 0 : idx - 1];
  double b = grid[std::min(idx + 1, grid.size() - 1)];
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - inv_phi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + inv_phi * (b - a), fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  if (fm > best.abs_chi_sq) best = {mid, fm};
  return best;
}

}  // namespace qom
