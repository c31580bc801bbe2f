#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qom/errors.hpp"
#include "qom/noise.hpp"
#include "qom/parallel.hpp"
#include "qom/params.hpp"
#include "qom/spectral.hpp"
#include "qom/steady_state.hpp"

namespace qom::oracle {

enum class Scheme { EulerMaruyama, StochasticHeun };

struct LangevinOptions {
  std::uint64_t seed = 42;
  std::size_t n_traj = 8;
  double dt = 0.0;               // s
  std::size_t n_steps = 0;       // recorded steps, after burn-in
  std::size_t burn_in_steps = 0;
  std::size_t decimation = 1;    // keep every n-th step
  Scheme scheme = Scheme::StochasticHeun;
  // Slave the cavity to α(Q) = -2iΩ/(γ_c + 4igQ²) instead of integrating it.
  bool adiabatic = false;
  bool thermal_noise = true;
  bool optical_noise = false;
  Branch branch = Branch::Positive;
  // Each step sums this many sub-increments of the Wiener path. A run at dt
  // with refinement 2 sees exactly the Brownian path of a run at dt/2.
  unsigned noise_refinement = 1;
  double initial_q_offset = 0.0;
  unsigned jobs = 1;
};

struct AbortReport {
  std::size_t trajectory = 0;
  std::size_t step = 0;
  double q = 0.0;
  std::string reason;
};

struct TrajectoryEnsemble {
  std::uint64_t seed = 0;
  std::size_t n_traj = 0;
  double dt = 0.0;
  std::size_t n_steps = 0;
  double sample_interval = 0.0;  // dt * decimation
  double q_s = 0.0;              // branch the records are measured from
  // q(t) = Q(t) - Q_s per trajectory; empty for aborted trajectories.
  std::vector<std::vector<double>> records;
  std::vector<AbortReport> aborted;
  SystemParams params_snapshot;
  LangevinOptions options;
};

// Flat white level of the classical thermal force, 2γ_m k_B T/(ħ ω_m).
inline double classical_force_level(const SystemParams& p) {
  return 2.0 * p.gamma_m * PhysicalConstants::k_B * p.temperature / (PhysicalConstants::hbar * p.omega_m);
}

namespace detail {

struct State {
  double q;
  double p;
  cplx a;
};

struct Model {
  SystemParams p;
  double omega_drive;
  bool adiabatic;

  State drift(const State& x) const {
    const cplx i(0.0, 1.0);
    const double q2 = x.q * x.q;
    const double intensity =
        adiabatic ? std::norm(adiabatic_amplitude(p, omega_drive, x.q)) : std::norm(x.a);
    State d;
    d.q = p.omega_m * x.p;
    d.p = -p.omega_m * x.q - 4.0 * p.g * intensity * x.q - p.gamma_m * x.p;
    d.a = adiabatic ? cplx(0.0)
                    : -0.5 * p.gamma_c * x.a - 2.0 * i * p.g * q2 * x.a - i * omega_drive;
    return d;
  }
};

inline State axpy(const State& x, const State& f, double h) {
  return {x.q + f.q * h, x.p + f.p * h, x.a + f.a * h};
}

inline std::mt19937_64 trajectory_engine(std::uint64_t seed, std::size_t index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

inline void validate_langevin(const SystemParams& p, const LangevinOptions& o) {
  p.validate();
  if (o.n_traj == 0) throw ValidationError("n_traj", "must be > 0");
  if (o.decimation == 0) throw ValidationError("decimation", "must be > 0");
  if (o.noise_refinement == 0) throw ValidationError("noise_refinement", "must be > 0");
  if (!(o.dt > 0.0)) throw ValidationError("dt", "must be > 0");
  if (o.adiabatic && o.optical_noise)
    throw ValidationError("optical_noise", "no cavity to drive when adiabatic elimination is on");
  const double dt_max = o.adiabatic ? 0.01 / p.omega_m : 0.05 / p.gamma_c;
  if (o.dt > dt_max * (1.0 + 1e-12))
    throw ValidationError("dt", o.adiabatic ? "must be <= 0.01/omega_m" : "must be <= 0.05/gamma_c");
  const double kt = PhysicalConstants::k_B * p.temperature;
  if (o.thermal_noise && p.temperature > 0.0 &&
      kt < 10.0 * PhysicalConstants::hbar * p.omega_m * (1.0 - 1e-9))
    throw DomainError("trajectories need k_B T >= 10 hbar omega_m (classical thermal noise)");
  if (p.g < 0.0 && std::abs(drive_offset(p)) <= 0.1 * p.gamma_m)
    throw DomainError("trajectories need |Omega - Omega_c| > 0.1 gamma_m");
}

// Integrates the full nonlinear classical Langevin equations from the mean-field
// fixed point. Trajectories run independently, each on its own RNG stream.
inline TrajectoryEnsemble integrate_langevin(const SystemParams& p, const LangevinOptions& o) {
  validate_langevin(p, o);
  const SteadyState ss = steady_state(p, o.branch);
  const detail::Model model{p, drive_strength(p), o.adiabatic};
  const double force_sigma = o.thermal_noise ? std::sqrt(classical_force_level(p)) : 0.0;
  const double optical_sigma = o.optical_noise ? std::sqrt(0.5 * p.gamma_c) : 0.0;
  const double sub_dt = o.dt / o.noise_refinement;
  const double sqrt_sub_dt = std::sqrt(sub_dt);
  const double limit = 1e6 * std::sqrt(ss.q_s2) + 1e6;
  const std::size_t n_records = o.n_steps / o.decimation;

  TrajectoryEnsemble ens;
  ens.seed = o.seed;
  ens.n_traj = o.n_traj;
  ens.dt = o.dt;
  ens.n_steps = o.n_steps;
  ens.sample_interval = o.dt * static_cast<double>(o.decimation);
  ens.q_s = ss.q_s;
  ens.params_snapshot = p;
  ens.options = o;
  ens.records.assign(o.n_traj, {});
  std::vector<std::optional<AbortReport>> aborts(o.n_traj);

  parallel_for(o.n_traj, o.jobs, [&](std::size_t traj) {
    auto engine = detail::trajectory_engine(o.seed, traj);
    std::normal_distribution<double> normal(0.0, 1.0);
    detail::State x{ss.q_s + o.initial_q_offset, ss.p_s, ss.alpha};
    std::vector<double> rec;
    rec.reserve(n_records);
    const std::size_t total = o.burn_in_steps + o.n_steps;
    for (std::size_t step = 0; step < total; ++step) {
      double dw = 0.0;
      cplx dz = 0.0;
      for (unsigned j = 0; j < o.noise_refinement; ++j) {
        if (o.thermal_noise) dw += normal(engine);
        if (o.optical_noise) {
          const double re = normal(engine);
          dz += cplx(re, normal(engine));
        }
      }
      const detail::State kick{0.0, force_sigma * sqrt_sub_dt * dw, optical_sigma * sqrt_sub_dt * dz};
      const detail::State f0 = model.drift(x);
      detail::State next = detail::axpy(x, f0, o.dt);
      next.p += kick.p;
      next.a += kick.a;
      if (o.scheme == Scheme::StochasticHeun) {
        const detail::State f1 = model.drift(next);
        next = detail::axpy(x, {0.5 * (f0.q + f1.q), 0.5 * (f0.p + f1.p), 0.5 * (f0.a + f1.a)}, o.dt);
        next.p += kick.p;
        next.a += kick.a;
      }
      x = next;
      const double q = x.q - ss.q_s;
      if (!std::isfinite(q) || std::abs(q) > limit) {
        aborts[traj] = AbortReport{traj, step, q, "trajectory left the stability envelope"};
        rec.clear();
        return;
      }
      if (step >= o.burn_in_steps && (step - o.burn_in_steps) % o.decimation == 0 &&
          rec.size() < n_records)
        rec.push_back(q);
    }
    ens.records[traj] = std::move(rec);
  });
  for (auto& a : aborts)
    if (a) ens.aborted.push_back(*a);
  return ens;
}

// One-sided PSD the trajectories should reproduce: classical white thermal
// force (and, if enabled, classical complex optical noise) filtered by χ.
// Adiabatic runs see the ζ₀ (factored) response, full runs the exact one.
inline double trajectory_reference_psd(const SystemParams& p, const SteadyState& s, double omega,
                                       const LangevinOptions& o) {
  const ChiMode mode = o.adiabatic ? ChiMode::Factored : ChiMode::Exact;
  const cplx chi = susceptibility(p, s, omega, mode);
  double force = o.thermal_noise ? classical_force_level(p) : 0.0;
  if (o.optical_noise) force += std::norm(eta(p, s, omega)) + std::norm(eta(p, s, -omega));
  return 2.0 * std::norm(chi) * force;
}

}  // namespace qom::oracle
