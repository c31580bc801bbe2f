#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "qom/grid.hpp"
#include "qom/noise.hpp"
#include "qom/oracle/linearized.hpp"

using namespace qom;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr double kHbar = PhysicalConstants::hbar;
constexpr double kKb = PhysicalConstants::k_B;

SystemParams at_offset(double off_over_gamma_m) {
  const SystemParams p = paper_parameters();
  return p.with_drive(Drive::from_critical(off_over_gamma_m * p.gamma_m));
}

// (γ_m/ω_m) ω (1 + coth(ħω/2kT)) in 50 digits, as 2ω/(1 - e^{-2x}) so the
// negative-frequency tail keeps its digits.
double thermal_reference(const SystemParams& p, double omega, double t) {
  const mp x = mp(kHbar) * omega / (2 * mp(kKb) * t);
  return static_cast<double>(mp(p.gamma_m) / p.omega_m * 2 * omega / (1 - boost::multiprecision::exp(-2 * x)));
}

}  // namespace

TEST(Thermal, MatchesMultiprecisionCoth) {
  const SystemParams p = paper_parameters();
  for (double t : {1e-6, 1e-3, 1.0, 300.0}) {
    for (double f : {-1.5, -1.0, -1e-3, 1e-9, 1e-4, 0.3, 1.0, 1.5}) {
      const double w = f * p.omega_m;
      const double ref = thermal_reference(p, w, t);
      if (ref < 1e-300) continue;
      EXPECT_NEAR(thermal_spectrum(p, w, t) / ref, 1.0, 1e-9) << "T=" << t << " f=" << f;
    }
  }
}

TEST(Thermal, AcrossSeriesExpansionBoundary) {
  // x = ħω/2kT straddles 1e-6 where the evaluation switches to a Laurent series.
  const SystemParams p = paper_parameters();
  const double t = 300.0;
  const double w_boundary = 2e-6 * kKb * t / kHbar;
  for (double f : {0.5, 0.999, 1.0, 1.001, 2.0}) {
    const double w = f * w_boundary;
    EXPECT_NEAR(thermal_spectrum(p, w, t) / thermal_reference(p, w, t), 1.0, 1e-12);
    EXPECT_NEAR(thermal_spectrum(p, -w, t) / thermal_reference(p, -w, t), 1.0, 1e-12);
  }
}

TEST(Thermal, Limits) {
  const SystemParams p = paper_parameters();
  // ω → 0: classical white level 2γ_m kT/(ħω_m).
  EXPECT_NEAR(thermal_spectrum(p, 0.0, 300.0) / (2.0 * p.gamma_m * kKb * 300.0 / (kHbar * p.omega_m)), 1.0,
              1e-15);
  EXPECT_NEAR(thermal_spectrum(p, 1e-3, 300.0) / thermal_spectrum(p, 0.0, 300.0), 1.0, 1e-9);
  // T = 0: zero point only, nothing at negative frequency.
  EXPECT_DOUBLE_EQ(thermal_spectrum(p, p.omega_m, 0.0), 2.0 * p.gamma_m);
  EXPECT_EQ(thermal_spectrum(p, -p.omega_m, 0.0), 0.0);
  EXPECT_NEAR(thermal_spectrum(p, p.omega_m, 1e-9) / (2.0 * p.gamma_m), 1.0, 1e-15);
  // Detailed balance: S(-ω)/S(ω) = exp(-ħω/kT).
  const double w = p.omega_m, t = 1e-4;
  EXPECT_NEAR(thermal_spectrum(p, -w, t) / thermal_spectrum(p, w, t) / std::exp(-kHbar * w / (kKb * t)), 1.0,
              1e-12);
}

TEST(Radiation, ZeroBelowThresholdLorentzianAbove) {
  const SystemParams lo = at_offset(-3.0);
  for (double f : {-1.0, 0.0, 1.0}) EXPECT_EQ(radiation_spectrum(lo, steady_state(lo), f * lo.omega_m), 0.0);

  const SystemParams p = at_offset(100.0);
  const SteadyState s = steady_state(p);
  const double centre = 2.0 * p.g * s.q_s2;
  const double half = 0.5 * p.gamma_c;
  const double peak = radiation_spectrum(p, s, centre);
  EXPECT_NEAR(radiation_spectrum(p, s, centre + half) / peak, 0.5, 1e-12);
  EXPECT_NEAR(radiation_spectrum(p, s, centre - half) / peak, 0.5, 1e-12);
  // Above threshold |α|² = ω_m/4|g|, so the peak is 16 g² Q_s² ω_m γ_c / (4|g| (γ_c/2)²).
  EXPECT_NEAR(peak / (16.0 * std::abs(p.g) * s.q_s2 * p.omega_m / p.gamma_c), 1.0, 1e-12);
}

TEST(Radiation, MatchesOpticalChannelOfLinearSolve) {
  for (double off : {0.2, 10.0, 1e3}) {
    const SystemParams p = at_offset(off);
    const SteadyState s = steady_state(p);
    const auto sys = oracle::build_linearized(p, s);
    for (double f : {0.0, 0.1, 0.9, 1.3}) {
      const double w = f * p.omega_m;
      const double a = std::norm(susceptibility(p, s, w)) * radiation_spectrum(p, s, w);
      const double b = oracle::spectrum_by_linear_solve(sys, w, 0.0, {false, true});
      EXPECT_NEAR(a / b, 1.0, 1e-8) << off << " " << f;
    }
  }
}

TEST(Psd, SpotValueUndriven) {
  // Ω = 0, ω = ω_m: |χ|² = 1/γ_m² and S_th = γ_m(1 + coth x), so S_qq = (1 + coth x)/γ_m.
  const SystemParams p = paper_parameters();
  const SteadyState s = steady_state(p);
  const double x = kHbar * p.omega_m / (2.0 * kKb * 300.0);
  const double expected = (1.0 + 1.0 / std::tanh(x)) / p.gamma_m;
  EXPECT_NEAR(psd(p, s, p.omega_m, 300.0) / expected, 1.0, 1e-10);
}

TEST(Psd, AffineInTemperatureAtZeroFrequency) {
  const SystemParams p = at_offset(0.01);
  const SteadyState s = steady_state(p);
  const double a = psd(p, s, 0.0, 0.0);
  const double b = psd(p, s, 0.0, 100.0);
  for (double t : {1e-2, 1.0, 37.0, 300.0}) EXPECT_NEAR(psd(p, s, 0.0, t) / (a + (b - a) * t / 100.0), 1.0, 1e-12);
}

TEST(Psd, NonDecreasingInTemperature) {
  const SystemParams p = at_offset(-2.0);
  const SteadyState s = steady_state(p);
  for (double f : {0.0, 0.5, 1.0}) {
    double prev = -1.0;
    for (double t : logspace(-6.0, 3.0, 37)) {
      const double v = psd(p, s, f * p.omega_m, t);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Psd, PeaksAtZeroNearCriticalPointAndAtResonanceWhenUndriven) {
  const SystemParams p0 = paper_parameters();
  const std::vector<double> grid = linspace(0.0, 1.5 * p0.omega_m, 3001);
  auto argmax = [&](const SystemParams& p) {
    const RealSpectrum sp = psd_series(p, steady_state(p), grid, 300.0);
    std::size_t k = 0;
    for (std::size_t i = 1; i < sp.size(); ++i)
      if (sp.values[i] > sp.values[k]) k = i;
    return sp.omega[k];
  };
  EXPECT_EQ(argmax(at_offset(0.01)), 0.0);
  EXPECT_NEAR(argmax(p0) / p0.omega_m, 1.0, 1e-3);
}

TEST(Psd, MatchesLinearSolveAtRandomPoints) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 64; ++k) {
    const double off = (k % 3 == 0 ? -100.0 * u(rng) - 0.35 : k % 3 == 1 ? -0.33 + 0.41 * u(rng) : 0.09 + 100.0 * u(rng));
    const SystemParams q = at_offset(off);
    const SteadyState s = steady_state(q);
    const double w = 1.5 * q.omega_m * u(rng);
    const double t = std::pow(10.0, -3.0 + 5.5 * u(rng));
    const double a = psd(q, s, w, t);
    const double b = oracle::spectrum_by_linear_solve(oracle::build_linearized(q, s), w, t);
    EXPECT_NEAR(a / b, 1.0, 1e-6) << "off " << off << " w " << w << " T " << t;
  }
}

TEST(Series, GridsAndUnits) {
  const SystemParams p = at_offset(1.0);
  const SteadyState s = steady_state(p);
  const std::vector<double> grid = default_frequency_grid(p);
  const RealSpectrum sp = psd_series(p, s, grid, 300.0);
  EXPECT_EQ(sp.size(), grid.size());
  EXPECT_EQ(sp.units, "s");
  EXPECT_EQ(sp.kind, SpectrumKind::Psd);
  EXPECT_EQ(thermal_series(p, grid, 1.0).units, "rad/s");
  EXPECT_EQ(radiation_series(p, s, grid).kind, SpectrumKind::RadiationNoise);
  EXPECT_EQ(susceptibility_series(p, s, grid).values[7], susceptibility(p, s, grid[7]));
  EXPECT_THROW(psd_series(p, s, std::vector<double>{1.0, 0.0}, 1.0), std::logic_error);
}
