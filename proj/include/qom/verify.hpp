#pragma once

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qom/config.hpp"
#include "qom/grid.hpp"
#include "qom/noise.hpp"
#include "qom/oracle/linearized.hpp"
#include "qom/oracle/monte_carlo.hpp"
#include "qom/sensitivity.hpp"
#include "qom/spectral.hpp"
#include "qom/steady_state.hpp"
#include "qom/sweep.hpp"

namespace qom {

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double expected = 0.0;
  std::string requirement;  // e.g. "0.876 ± 0.5%" or "< 1e-10"
  std::string detail;

  std::string line() const {
    std::ostringstream os;
    os << name << ": " << requirement << " observed=" << format_double(observed) << (pass ? " PASS" : " FAIL");
    if (!detail.empty()) os << " (" << detail << ")";
    return os.str();
  }
};

namespace detail {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline CheckResult relative_check(std::string name, double observed, double expected, double tol,
                                  const std::string& tol_text) {
  return {std::move(name), rel_err(observed, expected) <= tol, observed, expected,
          short_number(expected) + " ± " + tol_text, {}};
}

inline CheckResult bound_check(std::string name, double observed, double bound) {
  return {std::move(name), observed < bound, observed, bound, "< " + short_number(bound), {}};
}

// Runs fn; a thrown error becomes a failed check carrying the message.
inline CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    return {name, false, std::nan(""), std::nan(""), "check could not run", std::string("domain error: ") + e.what()};
  } catch (const std::exception& e) {
    return {name, false, std::nan(""), std::nan(""), "check could not run", std::string("error: ") + e.what()};
  }
}

}  // namespace detail

// max_ω |χ|² at Ω_c + 0.01 γ_m over max_ω |χ|² at Ω = 0.
inline double chi_enhancement(const SystemParams& base) {
  const std::vector<double> grid = default_frequency_grid(base);
  const SystemParams near = base.with_drive(Drive::from_critical(0.01 * base.gamma_m));
  const SystemParams off = base.with_drive(Drive::absolute(0.0));
  const double a = peak_susceptibility(near, steady_state(near), grid).abs_chi_sq;
  const double b = peak_susceptibility(off, steady_state(off), grid).abs_chi_sq;
  return a / b;
}

// Numbers quoted for the reference device; always evaluated on the built-in set.
inline std::vector<CheckResult> headline_checks() {
  std::vector<CheckResult> out;
  const SystemParams p = paper_parameters();
  out.push_back(detail::relative_check("xi0_high_T", sensitivity_0(p, 300.0, TemperatureLimit::HighT), 0.876,
                                       0.005, "0.5%"));
  const ExceptionalPoints ep = exceptional_points(p);
  const SystemParams pe = p.with_drive(Drive::from_critical(ep.offset_ep2));
  out.push_back(detail::relative_check("xi_s_at_ep2", sensitivity_S(pe, steady_state(pe)), 1.4e9, 0.05, "5%"));
  const double ratio = chi_enhancement(p);
  out.push_back({"chi_enhancement_log10", std::log10(ratio) >= 10.5, std::log10(ratio), 10.5, ">= 10.5", {}});
  return out;
}

// Closed-form identities and linear-solve cross-checks on the supplied parameters.
inline std::vector<CheckResult> identity_checks(const SystemParams& p, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const double gm = p.gamma_m;

  out.push_back(detail::guarded("bifurcation_residuals", [&] {
    const double oc = critical_drive(p);
    double worst = 0.0;
    bool below_zero = true;
    for (double r : linspace(0.0, 2.0, 200)) {
      const SystemParams q = p.with_drive(Drive::absolute(r * oc));
      const SteadyState s = steady_state(q);
      worst = std::max(worst, fixed_point_residual(q, s).normalized(q, s));
      if (drive_offset(q) <= 0.0 && s.q_s2 != 0.0) below_zero = false;
    }
    CheckResult c = detail::bound_check("bifurcation_residuals", worst, 1e-10);
    if (!below_zero) c.pass = false, c.detail = "Q_s^2 nonzero below threshold";
    return c;
  }));

  out.push_back(detail::guarded("intensity_pinning", [&] {
    const double oc = critical_drive(p);
    double worst = 0.0;
    for (double r : linspace(1.001, 2.0, 100)) {
      const SystemParams q = p.with_drive(Drive::absolute(r * oc));
      worst = std::max(worst, std::abs(steady_state(q).intensity() * 4.0 * std::abs(q.g) / q.omega_m - 1.0));
    }
    return detail::bound_check("intensity_pinning", worst, 1e-12);
  }));

  out.push_back(detail::guarded("cp_imag_zero_over_gamma_m", [&] {
    const SystemParams q = p.with_drive(Drive::from_critical(0.0));
    const Eigenfrequencies w = eigenfrequencies(q, steady_state(q));
    return detail::bound_check("cp_imag_zero_over_gamma_m", std::abs(w.plus.imag()) / gm, 1e-8);
  }));

  for (int which : {1, 2}) {
    const std::string name = "ep" + std::to_string(which) + "_degeneracy_over_gamma_m";
    out.push_back(detail::guarded(name, [&] {
      const ExceptionalPoints ep = exceptional_points(p);
      const SystemParams q = p.with_drive(Drive::from_critical(which == 1 ? ep.offset_ep1 : ep.offset_ep2));
      const Eigenfrequencies w = eigenfrequencies(q, steady_state(q));
      return detail::bound_check(name, std::abs(w.plus - w.minus) / gm, 1e-6);
    }));
  }

  out.push_back(detail::guarded("xi_s_ep2_analytic", [&] {
    const ExceptionalPoints ep = exceptional_points(p);
    const SystemParams q = p.with_drive(Drive::from_critical(ep.offset_ep2));
    constexpr double hbar = PhysicalConstants::hbar, kb = PhysicalConstants::k_B;
    return detail::relative_check("xi_s_ep2_analytic", sensitivity_S(q, steady_state(q)),
                                  32.0 * kb * p.omega_m / (hbar * gm * gm * gm), 1e-3, "1e-3 rel");
  }));

  out.push_back(detail::guarded("psd_slope_equals_xi_s", [&] {
    const SystemParams q = p.with_drive(Drive::from_critical(0.01 * gm));
    const SteadyState s = steady_state(q);
    return detail::relative_check("psd_slope_equals_xi_s", sensitivity_numeric(q, s, 0.0, 300.0),
                                  sensitivity_S(q, s), 1e-6, "1e-6 rel");
  }));

  out.push_back(detail::guarded("oracle_linear_solve_max_rel", [&] {
    const ExceptionalPoints ep = exceptional_points(p);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
      double off = 0.0;
      switch (k % 3) {
        case 0: off = -100.0 * gm + u(rng) * (ep.offset_ep1 + 100.0 * gm); break;
        case 1: off = ep.offset_ep1 + u(rng) * (ep.offset_ep2 - ep.offset_ep1); break;
        default: off = ep.offset_ep2 + u(rng) * (100.0 * gm - ep.offset_ep2); break;
      }
      if (std::abs(off) < 1e-3 * gm) off = std::copysign(1e-3 * gm, off);
      const double w = 1.5 * p.omega_m * u(rng);
      const double t = std::pow(10.0, -3.0 + u(rng) * std::log10(3e5));
      const SystemParams q = p.with_drive(Drive::from_critical(off));
      const SteadyState s = steady_state(q);
      const double a = psd(q, s, w, t);
      const double b = oracle::spectrum_by_linear_solve(oracle::build_linearized(q, s), w, t);
      worst = std::max(worst, detail::rel_err(a, b));
    }
    return detail::bound_check("oracle_linear_solve_max_rel", worst, 1e-6);
  }));

  out.push_back(detail::guarded("radiation_channel_max_rel", [&] {
    const SystemParams q = p.with_drive(Drive::from_critical(10.0 * gm));
    const SteadyState s = steady_state(q);
    const auto sys = oracle::build_linearized(q, s);
    double worst = 0.0;
    for (double w : linspace(0.0, 1.5 * p.omega_m, 16)) {
      const double a = std::norm(susceptibility(q, s, w)) * radiation_spectrum(q, s, w);
      const double b = oracle::spectrum_by_linear_solve(sys, w, 0.0, {false, true});
      worst = std::max(worst, detail::rel_err(a, b));
    }
    return detail::bound_check("radiation_channel_max_rel", worst, 1e-8);
  }));

  out.push_back(detail::guarded("exact_vs_factored_max_rel", [&] {
    const SystemParams q = p.with_drive(Drive::from_critical(0.01 * gm));
    const SteadyState s = steady_state(q);
    double worst = 0.0;
    for (double w : linspace(-p.omega_m, p.omega_m, 401)) {
      const cplx a = susceptibility(q, s, w, ChiMode::Exact);
      const cplx b = susceptibility(q, s, w, ChiMode::Factored);
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    return detail::bound_check("exact_vs_factored_max_rel", worst, 1e-3);
  }));
  return out;
}

inline nlohmann::json check_to_json(const CheckResult& c) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_double(v);
  };
  return {{"name", c.name},       {"pass", c.pass},           {"observed", num(c.observed)},
          {"expected", num(c.expected)}, {"requirement", c.requirement}, {"detail", c.detail}};
}

// Deterministic report: identical inputs and seed give identical JSON.
inline nlohmann::json verify(const SystemParams& p, VerifyLevel level, std::uint64_t seed, unsigned jobs = 1) {
  std::vector<CheckResult> checks = headline_checks();
  for (auto& c : identity_checks(p, seed)) checks.push_back(std::move(c));
  if (level == VerifyLevel::Full) {
    for (const auto& mc : oracle::desk_monte_carlo(seed, jobs)) {
      CheckResult c{"monte_carlo_" + mc.name, mc.pass(), mc.fraction(), mc.min_fraction,
                    ">= 0.95 of bins within 3 SE", {}};
      c.detail = std::to_string(mc.within) + "/" + std::to_string(mc.bins) + " bins, " +
                 std::to_string(mc.n_segments) + " segments, " + std::to_string(mc.aborted) + " aborted";
      checks.push_back(std::move(c));
    }
  }
  nlohmann::json report;
  report["level"] = level == VerifyLevel::Fast ? "fast" : "full";
  report["seed"] = seed;
  report["params"] = experiment_to_json(to_experiment(p));
  nlohmann::json arr = nlohmann::json::array(), lines = nlohmann::json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back(check_to_json(c));
    lines.push_back(c.line());
    all = all && c.pass;
  }
  report["checks"] = std::move(arr);
  report["lines"] = std::move(lines);
  report["pass"] = all;
  return report;
}

}  // namespace qom
