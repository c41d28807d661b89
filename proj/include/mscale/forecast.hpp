#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mscale/ghe.hpp"
#include "mscale/panel.hpp"
#include "mscale/spectral.hpp"

namespace mscale {

enum class ErrorMetric { absolute, squared };

struct ForecastConfig {
  /// Training window: the trend is fitted on the last `window` samples and
  /// the Hurst exponents on the window + 1 samples [t - window, t].
  std::size_t window = 50;
  std::vector<std::size_t> lags{1};
  GheConfig ghe = windowed_ghe_defaults();
  bool filtered = false;
  FilterSpec filter;
  ErrorMetric metric = ErrorMetric::absolute;

  void validate(std::size_t series_length) const;
};

struct ForecastRecord {
  std::size_t node = 0;  // index into the panel
  std::size_t origin = 0;
  std::size_t lag = 0;
  double predicted = 0.0;
  double actual = 0.0;
  double error = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  bool degenerate = false;  // H could not be estimated; excluded from fits
};

/// Slope of the line through the last sample that best fits the window:
/// sum_k k (S(t) - S(t-k)) / sum_k k^2. Throws WindowTooSmall below 2 samples.
double fit_trend_slope(std::span<const double> window);

/// S(t) + slope * lag, the slope fitted on [t - window + 1, t].
double forecast(std::span<const double> series, std::size_t origin, std::size_t lag,
                std::size_t window);

/// Records per node and lag: T - window - lag.
std::size_t study_record_count(std::size_t series_length, std::size_t window, std::size_t lag);

/// One record for every node, origin t in [window, T - 1 - lag] and lag,
/// ordered by node, then origin, then lag.
std::vector<ForecastRecord> run_study(const Panel& panel, const ForecastConfig& config,
                                      unsigned threads = 0);

/// log10(error) = log10(E0) + c H.
struct LogLinearFit {
  double e0 = 0.0;
  double c = 0.0;
  double r2 = 0.0;
  std::size_t n_points = 0;
  std::size_t excluded_zero_error = 0;
  std::size_t excluded_degenerate = 0;
};

enum class FitMode { pointwise, binned };

struct ErrorFitOptions {
  FitMode mode = FitMode::pointwise;
  std::size_t bins = 20;  // equal-width H bins; median log10 error per bin
  std::optional<std::size_t> lag;  // restrict to one lag
};

/// Pooled OLS of log10(error) on H(q), q in {1, 2}, over records with error > 0.
LogLinearFit fit_error_vs_hurst(std::span<const ForecastRecord> records, int q,
                                const ErrorFitOptions& options = {});

struct LagSlope {
  std::size_t lag = 0;
  LogLinearFit fit;
};

struct SlopeCurve {
  int q = 1;
  bool filtered = false;
  std::vector<LagSlope> points;
  /// Lags whose fit was skipped, with the reason.
  std::vector<std::pair<std::size_t, std::string>> skipped;
};

/// c(p) for every configured lag, on the filtered or raw panel per config.filtered.
SlopeCurve slope_vs_lag(const Panel& panel, const ForecastConfig& config, int q,
                        unsigned threads = 0);

struct SlopeComparison {
  SlopeCurve unfiltered;
  SlopeCurve filtered;
};

/// slope_vs_lag on the raw and on the notch-filtered panel.
SlopeComparison compare_slope_vs_lag(const Panel& panel, const ForecastConfig& config, int q,
                                     unsigned threads = 0);

}  // namespace mscale
