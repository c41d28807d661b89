#include "mscale/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "mscale/error.hpp"
#include "mscale/fft.hpp"
#include "mscale/parallel.hpp"

namespace mscale {

bool SpectrumReport::is_peak(std::size_t bin) const {
  return std::any_of(peaks.begin(), peaks.end(), [&](const SpectralPeak& p) { return p.bin == bin; });
}

std::vector<double> power_spectrum(std::span<const double> series) {
  if (series.size() < 4) throw SeriesTooShort("power_spectrum needs at least 4 samples");
  auto bins = fft::forward_real(series);
  std::vector<double> power(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) power[k] = std::norm(bins[k]);
  return power;
}

std::vector<SpectralPeak> find_peaks(std::span<const double> power, std::size_t length,
                                     const PeakCriterion& criterion) {
  if (criterion.ratio <= 0.0) throw InvalidConfig("peak ratio must be positive");
  std::vector<SpectralPeak> peaks;
  const std::size_t bins = power.size();
  if (bins < 3) return peaks;

  double max_power = 0.0;
  for (std::size_t k = 1; k < bins; ++k) max_power = std::max(max_power, power[k]);
  const double floor = max_power * criterion.min_relative_power;

  std::vector<double> hood;
  for (std::size_t k = 1; k < bins; ++k) {
    if (power[k] <= floor) continue;
    const std::size_t lo = k > criterion.halfwidth ? k - criterion.halfwidth : 1;
    const std::size_t hi = std::min(bins - 1, k + criterion.halfwidth);
    hood.assign(power.begin() + static_cast<std::ptrdiff_t>(lo),
                power.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const auto mid = hood.begin() + static_cast<std::ptrdiff_t>(hood.size() / 2);
    std::nth_element(hood.begin(), mid, hood.end());
    double median = *mid;
    if (hood.size() % 2 == 0) {
      const double below = *std::max_element(hood.begin(), mid);
      median = 0.5 * (median + below);
    }
    if (power[k] <= criterion.ratio * median) continue;

    SpectralPeak peak;
    peak.bin = k;
    peak.period_hours = static_cast<double>(length) / static_cast<double>(k);
    peak.ratio = median > 0.0 ? power[k] / median : INFINITY;
    double best = criterion.label_tolerance_bins;
    for (double period : criterion.standard_periods) {
      const double dist = std::abs(static_cast<double>(k) - static_cast<double>(length) / period);
      if (dist <= best) {
        best = dist;
        peak.label = period;
      }
    }
    peaks.push_back(peak);
  }
  return peaks;
}

SpectrumReport market_average_spectrum(const Panel& panel, const PeakCriterion& criterion,
                                       unsigned threads) {
  const std::size_t n = panel.node_count();
  std::vector<std::vector<double>> spectra(n);
  parallel_for(n, threads, [&](std::size_t i) { spectra[i] = power_spectrum(panel.row(i)); });

  SpectrumReport report;
  report.length = panel.length();
  const std::size_t bins = spectra.front().size();
  report.mean_power.assign(bins, 0.0);
  for (const auto& s : spectra)
    for (std::size_t k = 0; k < bins; ++k) report.mean_power[k] += s[k];
  for (auto& p : report.mean_power) p /= static_cast<double>(n);
  report.bin_freqs.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    report.bin_freqs[k] = static_cast<double>(k) / static_cast<double>(panel.length());
  report.peaks = find_peaks(report.mean_power, panel.length(), criterion);
  return report;
}

std::vector<std::size_t> notch_bins(std::size_t length, const FilterSpec& spec) {
  const std::size_t nyquist = length / 2;
  std::vector<std::size_t> out;
  for (double period : spec.periods_hours) {
    if (!(period >= 2.0) || !std::isfinite(period))
      throw PeriodOutOfRange("filter period must be at least 2 hours, got " +
                             std::to_string(period));
    const double center = std::round(static_cast<double>(length) / period);
    if (center < 1.0 + static_cast<double>(spec.bin_halfwidth) ||
        center + static_cast<double>(spec.bin_halfwidth) > static_cast<double>(nyquist))
      throw PeriodOutOfRange("period " + std::to_string(period) + " h with halfwidth " +
                             std::to_string(spec.bin_halfwidth) +
                             " does not fit a series of length " + std::to_string(length));
    const auto c = static_cast<std::size_t>(center);
    for (std::size_t k = c - spec.bin_halfwidth; k <= c + spec.bin_halfwidth; ++k) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> remove_components(std::span<const double> series, const FilterSpec& spec) {
  if (series.size() < 4) throw SeriesTooShort("remove_components needs at least 4 samples");
  const auto zeroed = notch_bins(series.size(), spec);
  auto bins = fft::forward_real(series);
  // The half-spectrum stores each conjugate pair once, so zeroing bin k here
  // also removes bin T - k.
  for (auto k : zeroed) bins[k] = 0.0;
  return fft::inverse_real(bins, series.size());
}

Panel filter_panel(const Panel& panel, const FilterSpec& spec, unsigned threads) {
  notch_bins(panel.length(), spec);
  std::vector<std::vector<double>> rows(panel.node_count());
  parallel_for(panel.node_count(), threads,
               [&](std::size_t i) { rows[i] = remove_components(panel.row(i), spec); });
  return Panel::from_rows(panel.nodes(), panel.start(), rows);
}

}  // namespace mscale
