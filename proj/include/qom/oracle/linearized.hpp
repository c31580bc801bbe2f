#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qom/noise.hpp"
#include "qom/params.hpp"
#include "qom/steady_state.hpp"

namespace qom::oracle {

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using InputMatrix = Eigen::Matrix<cplx, 4, 3>;

// Noise channel order in the input matrix.
enum Channel : int { kThermal = 0, kOptical = 1, kOpticalDagger = 2 };

// dx/dt = drift x + input n for the fluctuation vector x = (q, p, a, a†)
// driven by n = (ξ, a_in, a_in†).
struct LinearizedSystem {
  Matrix4c drift = Matrix4c::Zero();
  InputMatrix input = InputMatrix::Zero();
  SystemParams params;
};

inline LinearizedSystem build_linearized(const SystemParams& p, const SteadyState& s) {
  const cplx i(0.0, 1.0);
  const cplx a = s.alpha;
  const double qs = s.q_s;
  const double shift = 2.0 * p.g * s.q_s2;
  LinearizedSystem sys;
  sys.params = p;
  auto& m = sys.drift;
  // dq/dt = ω_m p
  m(0, 1) = p.omega_m;
  // dp/dt = -(ω_m + 4g|α|²) q - γ_m p - 4gQ_s(α* a + α a†) + ξ
  m(1, 0) = -s.stiffness;
  m(1, 1) = -p.gamma_m;
  m(1, 2) = -4.0 * p.g * qs * std::conj(a);
  m(1, 3) = -4.0 * p.g * qs * a;
  // da/dt = (-γ_c/2 - i2gQ_s²) a - i4gαQ_s q + sqrt(γ_c) a_in
  m(2, 0) = -4.0 * i * p.g * a * qs;
  m(2, 2) = cplx(-0.5 * p.gamma_c, -shift);
  // Hermitian conjugate of the cavity equation
  m(3, 0) = 4.0 * i * p.g * std::conj(a) * qs;
  m(3, 3) = cplx(-0.5 * p.gamma_c, shift);

  sys.input(1, kThermal) = 1.0;
  sys.input(2, kOptical) = std::sqrt(p.gamma_c);
  sys.input(3, kOpticalDagger) = std::sqrt(p.gamma_c);
  return sys;
}

inline std::array<cplx, 4> drift_eigenvalues(const LinearizedSystem& sys) {
  Eigen::ComplexEigenSolver<Matrix4c> solver(sys.drift, false);
  std::array<cplx, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = solver.eigenvalues()(k);
  return out;
}

inline bool is_stable(const LinearizedSystem& sys) {
  for (const cplx& l : drift_eigenvalues(sys))
    if (l.real() > 0.0) return false;
  return true;
}

// Row of (-iω I - drift)⁻¹ · input belonging to q: transfer of each channel to q(ω).
// Empty when the resolvent is singular.
inline std::optional<Eigen::Matrix<cplx, 1, 3>> position_transfer(const LinearizedSystem& sys,
                                                                  double omega) {
  const Matrix4c a = cplx(0.0, -omega) * Matrix4c::Identity() - sys.drift;
  Eigen::FullPivLU<Matrix4c> lu(a);
  if (!lu.isInvertible()) return std::nullopt;
  const InputMatrix x = lu.solve(sys.input);
  return x.row(0);
}

struct ChannelMask {
  bool thermal = true;
  bool optical = true;
};

// S_qq(ω) = Σ_jk H_j(ω) H_k(-ω) N_jk(ω) with ⟨n_j(ω) n_k(ω')⟩ = N_jk(ω) δ(ω+ω'):
// N_ξξ = S_m,th(ω), N_{a_in,a_in†} = 1, every other entry 0 (optical vacuum).
inline double spectrum_by_linear_solve(const LinearizedSystem& sys, double omega, double temperature,
                                       ChannelMask mask = {}) {
  const auto hp = position_transfer(sys, omega);
  const auto hm = position_transfer(sys, -omega);
  if (!hp || !hm) return std::numeric_limits<double>::infinity();
  cplx total = 0.0;
  if (mask.thermal)
    total += (*hp)(kThermal) * (*hm)(kThermal) * thermal_spectrum(sys.params, omega, temperature);
  if (mask.optical) total += (*hp)(kOptical) * (*hm)(kOpticalDagger);
  return total.real();
}

}  // namespace qom::oracle
