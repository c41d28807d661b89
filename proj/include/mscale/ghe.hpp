#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mscale/panel.hpp"

namespace mscale {

/// Generalized Hurst exponent settings. Lags run over tau = nu, 2nu, ... <= tau_max.
struct GheConfig {
  std::vector<double> q_grid{1.0, 2.0};
  std::size_t tau_max = 19 * 24;
  std::size_t nu = 1;
  /// Mean-preserving per-window linear detrend of X with this window, if set.
  std::optional<std::size_t> detrend;
  /// When nonempty, H(q) is averaged over fits at each of these tau_max values.
  std::vector<std::size_t> tau_max_sweep;

  /// Throws InvalidConfig / SeriesTooShort when the config cannot run on a
  /// series of the given length.
  void validate(std::size_t series_length) const;
};

/// q = {1, 2} with tau_max = 10, sized for ~50-sample windows.
inline GheConfig windowed_ghe_defaults() {
  GheConfig c;
  c.tau_max = 10;
  return c;
}

struct QEstimate {
  double q = 0.0;
  double hurst = 0.0;
  double fit_r2 = 0.0;
  /// Standard deviation of H across the tau_max sweep (0 without a sweep).
  double sweep_std = 0.0;
  /// <|X(t)|^q>, the tau-independent normalizer.
  double denominator = 0.0;
  /// K_q(tau) for tau in GheResult::lags.
  std::vector<double> structure;
};

struct GheResult {
  std::vector<std::size_t> lags;
  std::vector<QEstimate> estimates;

  /// H(q) for a q present in the grid; throws OutOfRange otherwise.
  double hurst(double q) const;
};

/// K_q(tau) = <|x(t+tau) - x(t)|^q> / <|x(t)|^q>. A constant nonzero series
/// gives 0; an all-zero series throws DegenerateSeries.
double structure_function(std::span<const double> x, double q, std::size_t tau);

/// Subtracts from each contiguous window of `window` samples the centered
/// part of its OLS line, b * (t - mean t). Window means are preserved, so
/// fluctuations longer than the window pass through untouched. A trailing
/// window shorter than 2 samples is left as is.
std::vector<double> detrend_windows(std::span<const double> x, std::size_t window);

/// GHE of a series. With apply_cumsum the structure functions are taken on
/// X = cumsum(series), otherwise on the series itself.
GheResult estimate_ghe(std::span<const double> series, const GheConfig& config,
                       bool apply_cumsum);
inline GheResult estimate_ghe(const SeriesView& s, const GheConfig& config, bool apply_cumsum) {
  return estimate_ghe(s.values, config, apply_cumsum);
}

struct MultiScalingReport {
  std::vector<double> q_grid;
  std::vector<double> mean_qH;
  std::vector<double> min_qH;
  std::vector<double> max_qH;
  /// Panel mean of H_i(1) - H_i(2).
  double concavity_gap = 0.0;
  std::size_t used_series = 0;
  std::size_t skipped_series = 0;
  /// Per-node estimates in panel order; empty optional for skipped nodes.
  std::vector<std::optional<GheResult>> per_node;
};

/// Aggregates q*H_i(q) over all nodes. Degenerate series are skipped and counted.
MultiScalingReport multiscaling_report(const Panel& panel, const GheConfig& config,
                                       bool apply_cumsum = true, unsigned threads = 0);

/// Frequency band (cycles per sample) for the spectral exponent fit.
struct SpectralBand {
  double low = 0.005;
  double high = 0.05;
};

struct SpectralExponent {
  double beta_spectral = 0.0;
  double beta_predicted = 0.0;  // 1 + 2 H(2)
  double hurst2 = 0.0;
  std::size_t fitted_bins = 0;
};

/// Compares the log-log slope of the periodogram of X with 1 + 2 H(2).
/// The periodogram is taken after subtracting the chord between X's end
/// points, and bins flagged as spectral peaks are left out of the fit.
SpectralExponent spectral_exponent_check(std::span<const double> series, const GheConfig& config,
                                         bool apply_cumsum = true, SpectralBand band = {});

/// max over windows and q of |H_detrended(q) - H_raw(q)| / |H_raw(q)|.
/// Returns 0 for an empty window list.
double detrending_robustness(std::span<const double> series, const GheConfig& config,
                             std::span<const std::size_t> windows, bool apply_cumsum = true);

}  // namespace mscale
