#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "qom/errors.hpp"
#include "qom/grid.hpp"
#include "qom/oracle/langevin.hpp"

namespace qom::oracle {

enum class Window { Hann, Rect };

struct WelchOptions {
  std::size_t n_per_seg = 1024;
  double overlap_fraction = 0.5;
  Window window = Window::Hann;
  bool detrend = true;  // subtract each segment's mean
};

struct EstimatedPsd {
  RealSpectrum spectrum;               // one-sided, ∫ S dω/2π over [0, Nyquist] = variance
  std::vector<double> standard_error;  // of the segment average, per bin
  std::size_t n_segments = 0;
  std::vector<std::string> warnings;
};

// Averaged windowed periodogram. Segments from several records (trajectories)
// pool into one estimate.
class WelchAccumulator {
 public:
  WelchAccumulator(double sample_interval, WelchOptions opts)
      : dt_(sample_interval), opts_(opts) {
    const std::size_t n = opts_.n_per_seg;
    if (n < 2) throw ValidationError("n_per_seg", "must be >= 2");
    if (!(opts_.overlap_fraction >= 0.0 && opts_.overlap_fraction < 1.0))
      throw ValidationError("overlap_fraction", "must be in [0, 1)");
    if (!(dt_ > 0.0)) throw ValidationError("sample_interval", "must be > 0");
    window_.resize(n, 1.0);
    if (opts_.window == Window::Hann)
      for (std::size_t k = 0; k < n; ++k)
        window_[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / static_cast<double>(n)));
    for (double w : window_) window_power_ += w * w;
    sum_.assign(n / 2 + 1, 0.0);
    sum_sq_.assign(n / 2 + 1, 0.0);
  }

  void add_record(std::span<const double> x) {
    const std::size_t n = opts_.n_per_seg;
    if (x.size() < n) throw ValidationError("n_per_seg", "longer than the record");
    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                  std::floor(n * (1.0 - opts_.overlap_fraction))));
    std::vector<double> seg(n);
    std::vector<std::complex<double>> spec;
    for (std::size_t start = 0; start + n <= x.size(); start += hop) {
      double mean = 0.0;
      if (opts_.detrend) {
        for (std::size_t k = 0; k < n; ++k) mean += x[start + k];
        mean /= static_cast<double>(n);
      }
      for (std::size_t k = 0; k < n; ++k) seg[k] = (x[start + k] - mean) * window_[k];
      fft_.fwd(spec, seg);
      for (std::size_t k = 0; k < sum_.size(); ++k) {
        const double edge = (k == 0 || (n % 2 == 0 && k == n / 2)) ? 1.0 : 2.0;
        const double pk = edge * dt_ * std::norm(spec[k]) / window_power_;
        sum_[k] += pk;
        sum_sq_[k] += pk * pk;
      }
      ++segments_;
    }
  }

  EstimatedPsd finish() const {
    EstimatedPsd out;
    out.n_segments = segments_;
    const std::size_t n = opts_.n_per_seg;
    const double m = static_cast<double>(segments_);
    out.spectrum.kind = SpectrumKind::Psd;
    out.spectrum.units = "s";
    for (std::size_t k = 0; k < sum_.size(); ++k) {
      out.spectrum.omega.push_back(2.0 * std::numbers::pi * k / (n * dt_));
      const double mean = segments_ ? sum_[k] / m : 0.0;
      out.spectrum.values.push_back(mean);
      double var = 0.0;
      if (segments_ > 1) var = std::max(0.0, (sum_sq_[k] - m * mean * mean) / (m - 1.0));
      out.standard_error.push_back(segments_ ? std::sqrt(var / m) : 0.0);
    }
    if (segments_ < 8)
      out.warnings.push_back("only " + std::to_string(segments_) +
                             " segments averaged; standard errors are unreliable");
    return out;
  }

 private:
  double dt_;
  WelchOptions opts_;
  std::vector<double> window_;
  double window_power_ = 0.0;
  std::vector<double> sum_, sum_sq_;
  std::size_t segments_ = 0;
  Eigen::FFT<double> fft_;
};

inline EstimatedPsd estimate_psd(std::span<const double> signal, double sample_interval,
                                 const WelchOptions& opts) {
  WelchAccumulator acc(sample_interval, opts);
  acc.add_record(signal);
  return acc.finish();
}

// Pools the segments of every non-aborted trajectory.
inline EstimatedPsd estimate_psd(const TrajectoryEnsemble& ens, const WelchOptions& opts) {
  WelchAccumulator acc(ens.sample_interval, opts);
  for (const auto& r : ens.records)
    if (!r.empty()) acc.add_record(r);
  EstimatedPsd out = acc.finish();
  if (!ens.aborted.empty())
    out.warnings.push_back(std::to_string(ens.aborted.size()) + " trajectories aborted");
  return out;
}

struct SpectrumAgreement {
  std::size_t bins = 0;
  std::size_t within = 0;
  double fraction() const { return bins ? static_cast<double>(within) / bins : 0.0; }
};

// Counts bins in (omega_lo, omega_hi] where |estimate - reference| <= n_se standard errors.
// The DC bin is excluded: detrending empties it.
inline SpectrumAgreement compare_within_standard_errors(const EstimatedPsd& est,
                                                        const std::function<double(double)>& reference,
                                                        double omega_lo, double omega_hi,
                                                        double n_se = 3.0) {
  SpectrumAgreement a;
  for (std::size_t k = 1; k < est.spectrum.size(); ++k) {
    const double w = est.spectrum.omega[k];
    if (w < omega_lo || w > omega_hi) continue;
    ++a.bins;
    if (std::abs(est.spectrum.values[k] - reference(w)) <= n_se * est.standard_error[k]) ++a.within;
  }
  return a;
}

}  // namespace qom::oracle
