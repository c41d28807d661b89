#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mscale/panel.hpp"

namespace mscale {

/// Rule for flagging a bin as a spectral peak: its power exceeds
/// `ratio` times the median power over the bins within `halfwidth` of it.
struct PeakCriterion {
  double ratio = 10.0;
  std::size_t halfwidth = 16;
  /// Candidate periods (hours) used to label peaks.
  std::vector<double> standard_periods{24.0, 12.0, 8.0, 6.0};
  /// A peak gets a label when it lies within this many bins of T / period.
  double label_tolerance_bins = 1.0;
  /// Bins below this fraction of the largest non-DC power are never peaks.
  /// Keeps round-off in noise-free spectra from producing spurious flags.
  double min_relative_power = 1e-10;
};

struct SpectralPeak {
  std::size_t bin = 0;
  double period_hours = 0.0;
  double ratio = 0.0;  // power / local median
  std::optional<double> label;
};

struct SpectrumReport {
  std::size_t length = 0;  // T of the underlying series
  std::vector<double> bin_freqs;  // cycles per hour
  std::vector<double> mean_power;
  std::vector<SpectralPeak> peaks;

  bool is_peak(std::size_t bin) const;
};

/// Notch filter: each period removes bin round(T / period) and `bin_halfwidth`
/// neighbours on each side (with their conjugate mirrors).
struct FilterSpec {
  std::vector<double> periods_hours{24.0, 12.0, 8.0, 6.0};
  std::size_t bin_halfwidth = 0;
};

/// |FFT(x)_k|^2 for k = 0..floor(T/2). No window is applied.
std::vector<double> power_spectrum(std::span<const double> series);
inline std::vector<double> power_spectrum(const SeriesView& s) { return power_spectrum(s.values); }

/// Peaks of a one-sided spectrum of a length-T series. The DC bin is never a peak.
std::vector<SpectralPeak> find_peaks(std::span<const double> power, std::size_t length,
                                     const PeakCriterion& criterion = {});

/// Node-averaged power spectrum with flagged peaks.
SpectrumReport market_average_spectrum(const Panel& panel, const PeakCriterion& criterion = {},
                                       unsigned threads = 0);

/// Bin indices zeroed by `spec` on a length-T series. Throws PeriodOutOfRange.
std::vector<std::size_t> notch_bins(std::size_t length, const FilterSpec& spec);

/// Removes the bins selected by `spec` from the spectrum and transforms back.
/// The DC bin is never touched, so the mean is preserved.
std::vector<double> remove_components(std::span<const double> series, const FilterSpec& spec);
inline std::vector<double> remove_components(const SeriesView& s, const FilterSpec& spec) {
  return remove_components(s.values, spec);
}

/// remove_components applied to every node.
Panel filter_panel(const Panel& panel, const FilterSpec& spec, unsigned threads = 0);

}  // namespace mscale
