#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qom/sensitivity.hpp"

using namespace qom;

namespace {

constexpr double kHbar = PhysicalConstants::hbar;
constexpr double kKb = PhysicalConstants::k_B;

SystemParams at_offset(double off_over_gamma_m) {
  const SystemParams p = paper_parameters();
  return p.with_drive(Drive::from_critical(off_over_gamma_m * p.gamma_m));
}

}  // namespace

TEST(Xi0, HighTemperatureValue) {
  const SystemParams p = paper_parameters();
  // 2 k_B / (ħ ω_m γ_m) from the constants directly.
  const double expected = 2.0 * 1.380649e-23 / (1.054571817e-34 * p.omega_m * p.gamma_m);
  EXPECT_NEAR(sensitivity_0(p, 300.0, TemperatureLimit::HighT) / expected, 1.0, 1e-14);
  EXPECT_NEAR(sensitivity_0(p, 300.0, TemperatureLimit::HighT), 0.876, 0.005 * 0.876);
}

TEST(Xi0, FullFormApproachesLimits) {
  const SystemParams p = paper_parameters();
  const double hi = sensitivity_0(p, 1.0, TemperatureLimit::HighT);
  // kT/ħω_m ≈ 7e5 at 300 K; the correction is -(ħω/kT)²/12.
  EXPECT_NEAR(sensitivity_0(p, 300.0) / hi, 1.0, 1e-10);
  // ħω_m/kT ≈ 42 at 10 μK: the 1/sinh² form equals the exponential one to e^{-42}.
  EXPECT_NEAR(sensitivity_0(p, 1e-5) / sensitivity_0(p, 1e-5, TemperatureLimit::LowT), 1.0, 1e-15);
  EXPECT_LT(sensitivity_0(p, 1e-5), 1e-10 * hi);
  EXPECT_THROW(sensitivity_0(p, 0.0), DomainError);
  EXPECT_NO_THROW(sensitivity_0(p, 0.0, TemperatureLimit::HighT));
}

TEST(Xi0, EqualsNumericSlopeOfUndrivenPsd) {
  const SystemParams p = paper_parameters();
  const SteadyState s = steady_state(p);
  for (double t : {0.1, 1.0, 300.0}) {
    const double numeric = sensitivity_numeric(p, s, p.omega_m, t);
    EXPECT_NEAR(numeric / sensitivity_0(p, t), 1.0, 1e-5) << t;
  }
}

TEST(XiS, ValueAtSecondExceptionalPoint) {
  const SystemParams p0 = paper_parameters();
  const SystemParams p = p0.with_drive(Drive::from_critical(exceptional_points(p0).offset_ep2));
  const double xi = sensitivity_S(p, steady_state(p));
  EXPECT_NEAR(xi, 1.4e9, 0.05 * 1.4e9);
  EXPECT_NEAR(xi / (32.0 * kKb * p.omega_m / (kHbar * std::pow(p.gamma_m, 3))), 1.0, 1e-3);
}

TEST(XiS, EqualsPsdSlopeAtAnyTemperature) {
  for (double off : {-0.3, -0.05, 0.01, 0.05}) {
    const SystemParams p = at_offset(off);
    const SteadyState s = steady_state(p);
    const double xi = sensitivity_S(p, s);
    for (double t : {1e-6, 1e-2, 1.0, 300.0})
      EXPECT_NEAR(sensitivity_numeric(p, s, 0.0, t) / xi, 1.0, 1e-6) << off << " " << t;
  }
}

TEST(XiS, DivergesAtCriticalPoint) {
  const SystemParams p = at_offset(0.0);
  EXPECT_TRUE(std::isinf(sensitivity_S(p, steady_state(p))));
  EXPECT_GT(sensitivity_S(at_offset(0.001), steady_state(at_offset(0.001))),
            sensitivity_S(at_offset(0.01), steady_state(at_offset(0.01))));
}

TEST(XiS, RegimeErrors) {
  const SystemParams broken = at_offset(1.0);
  EXPECT_THROW(sensitivity_S(broken, steady_state(broken)), RegimeError);
  const SystemParams sym = at_offset(0.01);
  EXPECT_THROW(sensitivity_B(sym, steady_state(sym), 300.0), RegimeError);
}

TEST(XiB, UndrivenReducesToXi0) {
  const SystemParams p = paper_parameters();
  const SteadyState s = steady_state(p);
  EXPECT_NEAR(sensitivity_B(p, s, 300.0, TemperatureLimit::HighT) /
                  sensitivity_0(p, 300.0, TemperatureLimit::HighT), 1.0, 0.01);
  EXPECT_NEAR(sensitivity_B(p, s, 300.0) / sensitivity_0(p, 300.0), 1.0, 0.01);
}

TEST(XiB, ClosedFormMatchesNumericSlope) {
  for (double off : {-100.0, -1.0, 1.0, 100.0}) {
    const SystemParams p = at_offset(off);
    const SteadyState s = steady_state(p);
    const double w = effective_frequency(p, s);
    for (double t : {1e-3, 1.0, 300.0})
      EXPECT_NEAR(sensitivity_numeric(p, s, w, t) / sensitivity_B(p, s, t), 1.0, 1e-5) << off << " " << t;
  }
}

TEST(XiB, LowTemperatureForm) {
  // ħω_eff/2kT = 5 at offset -γ_m: the exponential form is within 2e^{-10} of the full one.
  const SystemParams p = at_offset(-1.0);
  const SteadyState s = steady_state(p);
  const double w = effective_frequency(p, s);
  const double t = kHbar * w / (10.0 * kKb);
  EXPECT_NEAR(sensitivity_B(p, s, t, TemperatureLimit::LowT) / sensitivity_B(p, s, t), 1.0, 1e-3);
  EXPECT_EQ(detail::classify_temperature(w, t), TemperatureLimit::LowT);
}

TEST(Xi0, LowTemperatureNumericSlope) {
  // ħω_m/2kT = 5; T ≈ 42 μK keeps the 1e-9 K difference step small relative to T.
  const SystemParams p = paper_parameters();
  const double t = kHbar * p.omega_m / (10.0 * kKb);
  const double full = sensitivity_0(p, t);
  EXPECT_NEAR(sensitivity_numeric(p, steady_state(p), p.omega_m, t) / full, 1.0, 1e-4);
  EXPECT_NEAR(sensitivity_0(p, t, TemperatureLimit::LowT) / full, 1.0, 1e-3);
}

TEST(XiB, HighTemperatureLimit) {
  const SystemParams p = at_offset(2.0);
  const SteadyState s = steady_state(p);
  EXPECT_NEAR(sensitivity_B(p, s, 300.0) / sensitivity_B(p, s, 300.0, TemperatureLimit::HighT), 1.0, 1e-9);
}

TEST(Flatness, OneMicrokelvin) {
  const double t = 1e-6;
  const SystemParams ps = at_offset(0.01);
  const SteadyState ss = steady_state(ps);
  const double xi_s = sensitivity_S(ps, ss);
  EXPECT_NEAR(sensitivity_numeric(ps, ss, 0.0, t) / xi_s, 1.0, 1e-4);
  const SystemParams pb = at_offset(1.0);
  EXPECT_LT(sensitivity_B(pb, steady_state(pb), t), 1e-3 * xi_s);
  EXPECT_LT(sensitivity_0(paper_parameters(), t), 1e-3 * xi_s);
}

TEST(Report, PicksClosedFormByRegime) {
  const SensitivityReport sym = sensitivity_report(at_offset(0.01), 300.0);
  EXPECT_EQ(sym.closed_form, "xi_s");
  EXPECT_EQ(sym.omega_eval, 0.0);
  EXPECT_EQ(sym.regime, Regime::AntiPTSymmetric);
  EXPECT_EQ(sym.limit_label, TemperatureLimit::HighT);
  EXPECT_NEAR(sym.xi_numeric / *sym.xi_closed_form, 1.0, 1e-6);

  const SensitivityReport br = sensitivity_report(at_offset(5.0), 300.0);
  EXPECT_EQ(br.closed_form, "xi_b");
  EXPECT_GT(br.omega_eval, 0.0);
  EXPECT_NEAR(br.xi_numeric / *br.xi_closed_form, 1.0, 1e-5);

  const SensitivityReport zero = sensitivity_report(at_offset(5.0), 300.0, OmegaPolicy::AtZero);
  EXPECT_EQ(zero.closed_form, "none");
  EXPECT_FALSE(zero.xi_closed_form.has_value());

  const SensitivityReport bare = sensitivity_report(paper_parameters(), 300.0);
  EXPECT_EQ(bare.closed_form, "xi_0");
}

TEST(Sweep, ColumnsAndErrorRows) {
  const SystemParams p = paper_parameters();
  const std::vector<Drive> drives{Drive::from_critical(0.01 * p.gamma_m), Drive::from_critical(p.gamma_m)};
  const std::vector<double> temps{0.0, 1.0, 300.0};
  const SweepResult r = sensitivity_sweep(p, drives, temps);
  EXPECT_EQ(r.rows(), 6u);
  EXPECT_EQ(r.header(),
            "omega_drive_offset_over_gamma_m,omega_drive_rad_s,temperature_k,regime,omega_eval_rad_s,"
            "closed_form,xi_closed_s_per_k,xi_numeric_s_per_k,xi0_s_per_k,temperature_limit,status");
  const auto& status = r.labels("status");
  EXPECT_NE(status[0], "ok");
  EXPECT_TRUE(std::isnan(r.numeric("xi_numeric_s_per_k")[0]));
  for (std::size_t k : {1u, 2u, 4u, 5u}) EXPECT_EQ(status[k], "ok");
  EXPECT_EQ(r.labels("closed_form")[2], "xi_s");
  EXPECT_EQ(r.labels("closed_form")[5], "xi_b");
  EXPECT_NEAR(r.numeric("omega_drive_offset_over_gamma_m")[3], 1.0, 1e-6);
  EXPECT_THROW(sensitivity_sweep(p, std::vector<Drive>{}, temps), ValidationError);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  const SystemParams p = paper_parameters();
  std::vector<Drive> drives;
  for (double off : {-3.0, -0.2, 0.01, 0.05, 2.0}) drives.push_back(Drive::from_critical(off * p.gamma_m));
  const std::vector<double> temps{1e-3, 1.0, 300.0};
  const SweepResult a = sensitivity_sweep(p, drives, temps, OmegaPolicy::AtOmegaEff, 1);
  const SweepResult b = sensitivity_sweep(p, drives, temps, OmegaPolicy::AtOmegaEff, 4);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}
