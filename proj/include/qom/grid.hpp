#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "qom/params.hpp"

namespace qom {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

inline std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t n) {
  std::vector<double> out = linspace(lo_exp, hi_exp, n);
  for (double& v : out) v = std::pow(10.0, v);
  return out;
}

struct Cluster {
  double center;
  double min_width;  // innermost offset from the center
  double max_width;  // outermost offset
};

// Uniform background on [lo, hi] plus geometric clusters of points around
// each center (the center itself included). Sorted, duplicates removed, so
// the result holds at most n points.
inline std::vector<double> clustered_grid(double lo, double hi, std::size_t n,
                                          std::initializer_list<Cluster> clusters) {
  if (!(hi > lo)) throw std::invalid_argument("clustered_grid: need hi > lo");
  const std::size_t per_side = clusters.size() == 0 ? 0 : n / (4 * clusters.size());
  const std::size_t n_cluster = clusters.size() * (2 * per_side + 1);
  if (n_cluster >= n) throw std::invalid_argument("clustered_grid: n too small");
  std::vector<double> out = linspace(lo, hi, n - n_cluster);
  for (const Cluster& c : clusters) {
    out.push_back(c.center);
    const auto offsets = logspace(std::log10(c.min_width), std::log10(c.max_width), per_side);
    for (double off : offsets) {
      out.push_back(c.center - off);
      out.push_back(c.center + off);
    }
  }
  std::erase_if(out, [&](double w) { return w < lo || w > hi; });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Default susceptibility/PSD grid: [-span ω_m, span ω_m], dense near 0 and ±ω_m
// where the near-CP peak and the bare resonances sit.
inline std::vector<double> default_frequency_grid(const SystemParams& p, std::size_t n = 4001,
                                                  double span = 1.5) {
  const double wm = p.omega_m;
  const double inner = 1e-6 * p.gamma_m;
  return clustered_grid(-span * wm, span * wm, n,
                        {{0.0, inner, 0.5 * wm}, {-wm, inner, 0.25 * wm}, {wm, inner, 0.25 * wm}});
}

enum class SpectrumKind { Chi, ThermalNoise, RadiationNoise, Psd };

// Values sampled on a strictly increasing angular-frequency grid.
template <class T>
struct Series {
  std::vector<double> omega;  // rad/s
  std::vector<T> values;
  SpectrumKind kind = SpectrumKind::Psd;
  std::string units;

  void check() const {
    if (omega.size() != values.size()) throw std::logic_error("Series: length mismatch");
    if (std::adjacent_find(omega.begin(), omega.end(), std::greater_equal<>()) != omega.end())
      throw std::logic_error("Series: grid not strictly increasing");
  }
  std::size_t size() const { return omega.size(); }
};

using RealSpectrum = Series<double>;
using ComplexSpectrum = Series<std::complex<double>>;

}  // namespace qom
