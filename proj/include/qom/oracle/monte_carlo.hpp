#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qom/noise.hpp"
#include "qom/oracle/langevin.hpp"
#include "qom/oracle/welch.hpp"
#include "qom/params.hpp"

namespace qom::oracle {

// One trajectory-vs-analytic PSD comparison at desk scale.
struct MonteCarloCheck {
  std::string name;
  SystemParams params;
  LangevinOptions langevin;
  WelchOptions welch;
  double band_lo = 0.0;  // rad/s
  double band_hi = 0.0;
  std::size_t bins = 0;
  std::size_t within = 0;
  std::size_t n_segments = 0;
  std::size_t aborted = 0;
  double peak_estimate = 0.0;   // estimated PSD at the bin nearest the analytic peak
  double peak_reference = 0.0;
  std::vector<std::string> warnings;
  double min_fraction = 0.95;

  double fraction() const { return bins ? static_cast<double>(within) / bins : 0.0; }
  bool pass() const { return aborted == 0 && bins > 0 && fraction() >= min_fraction; }
};

struct DeskRun {
  std::size_t n_traj = 8;
  std::size_t segments_per_traj = 16;  // at 50% overlap
  std::size_t n_per_seg = 65536;
  std::size_t decimation = 50;
  double dt_omega_m = 1e-3;             // dt in units of 1/ω_m
  double burn_in_omega_m = 2000.0;      // burn-in time in units of 1/ω_m
};

// Desk-scale operating points: below threshold (Ω = 0.6 Ω_c) and above
// threshold (Ω²/Ω_c² - 1 = 0.005).
inline std::vector<SystemParams> desk_operating_points() {
  const SystemParams base = desk_parameters();
  const double oc = critical_drive(base);
  return {base.with_drive(Drive::absolute(0.6 * oc)),
          base.with_drive(Drive::absolute(std::sqrt(1.005) * oc))};
}

inline MonteCarloCheck run_monte_carlo_check(const SystemParams& p, std::string name, std::uint64_t seed,
                                             const DeskRun& run = {}, unsigned jobs = 1,
                                             bool adiabatic = false) {
  MonteCarloCheck c;
  c.name = std::move(name);
  c.params = p;
  LangevinOptions& o = c.langevin;
  o.seed = seed;
  o.n_traj = run.n_traj;
  o.dt = run.dt_omega_m / p.omega_m;
  o.decimation = run.decimation;
  const std::size_t samples = (run.segments_per_traj + 1) * run.n_per_seg / 2;
  o.n_steps = samples * run.decimation;
  o.burn_in_steps = static_cast<std::size_t>(run.burn_in_omega_m / run.dt_omega_m);
  o.adiabatic = adiabatic;
  o.jobs = jobs;
  c.welch.n_per_seg = run.n_per_seg;

  const TrajectoryEnsemble ens = integrate_langevin(p, o);
  const EstimatedPsd est = estimate_psd(ens, c.welch);
  const SteadyState s = steady_state(p, o.branch);
  auto ref = [&](double w) { return trajectory_reference_psd(p, s, w, o); };
  c.band_lo = 0.0;
  c.band_hi = 1.2 * p.omega_m;
  const SpectrumAgreement a = compare_within_standard_errors(est, ref, c.band_lo, c.band_hi, 3.0);
  c.bins = a.bins;
  c.within = a.within;
  c.n_segments = est.n_segments;
  c.aborted = ens.aborted.size();
  c.warnings = est.warnings;

  const double w_peak = std::abs(eigenfrequencies(p, s).plus.real());
  std::size_t k_peak = 1;
  for (std::size_t k = 1; k < est.spectrum.size(); ++k)
    if (std::abs(est.spectrum.omega[k] - w_peak) < std::abs(est.spectrum.omega[k_peak] - w_peak)) k_peak = k;
  c.peak_estimate = est.spectrum.values[k_peak];
  c.peak_reference = ref(est.spectrum.omega[k_peak]);
  return c;
}

inline std::vector<MonteCarloCheck> desk_monte_carlo(std::uint64_t seed, unsigned jobs = 1,
                                                     const DeskRun& run = {}) {
  const auto points = desk_operating_points();
  return {run_monte_carlo_check(points[0], "desk_below_threshold", seed, run, jobs),
          run_monte_carlo_check(points[1], "desk_above_threshold", seed, run, jobs)};
}

}  // namespace qom::oracle
