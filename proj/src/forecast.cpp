#include "mscale/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mscale/error.hpp"
#include "mscale/parallel.hpp"
#include "mscale/regression.hpp"

namespace mscale {

void ForecastConfig::validate(std::size_t series_length) const {
  if (window < 3) throw WindowTooSmall("training window must be at least 3 samples");
  if (lags.empty()) throw InvalidConfig("no forecast lags given");
  std::size_t max_lag = 0;
  for (auto p : lags) {
    if (p < 1) throw InvalidConfig("forecast lags must be at least 1");
    max_lag = std::max(max_lag, p);
  }
  if (2 * ghe.tau_max > window)
    throw InvalidConfig("tau_max must not exceed half the training window");
  ghe.validate(window + 1);
  if (series_length <= window + max_lag)
    throw SeriesTooShort("series length must exceed window + largest lag");
}

double fit_trend_slope(std::span<const double> window) {
  if (window.size() < 2) throw WindowTooSmall("trend window needs at least 2 samples");
  const std::size_t n = window.size();
  const double last = window[n - 1];
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double k = static_cast<double>(n - 1 - j);
    num += k * (last - window[j]);
    den += k * k;
  }
  return num / den;
}

double forecast(std::span<const double> series, std::size_t origin, std::size_t lag,
                std::size_t window) {
  if (window < 2) throw WindowTooSmall("trend window needs at least 2 samples");
  if (origin + 1 < window || origin + lag >= series.size())
    throw OutOfRange("forecast origin " + std::to_string(origin) + " with lag " +
                     std::to_string(lag) + " is outside the series");
  const double slope = fit_trend_slope(series.subspan(origin + 1 - window, window));
  return series[origin] + slope * static_cast<double>(lag);
}

std::size_t study_record_count(std::size_t series_length, std::size_t window, std::size_t lag) {
  return series_length > window + lag ? series_length - window - lag : 0;
}

std::vector<ForecastRecord> run_study(const Panel& panel, const ForecastConfig& config,
                                      unsigned threads) {
  config.validate(panel.length());
  const Panel source = config.filtered ? filter_panel(panel, config.filter, threads) : panel;

  GheConfig ghe = config.ghe;
  ghe.q_grid = {1.0, 2.0};

  const std::size_t n = source.node_count();
  const std::size_t len = source.length();
  const std::size_t min_lag = *std::min_element(config.lags.begin(), config.lags.end());
  const std::size_t last_origin = len - 1 - min_lag;

  std::vector<std::vector<ForecastRecord>> per_node(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto row = source.row(i);
    auto& out = per_node[i];
    for (std::size_t t = config.window; t <= last_origin; ++t) {
      double h1 = std::numeric_limits<double>::quiet_NaN();
      double h2 = h1;
      bool degenerate = false;
      try {
        const auto res = estimate_ghe(row.subspan(t - config.window, config.window + 1), ghe, true);
        h1 = res.estimates[0].hurst;
        h2 = res.estimates[1].hurst;
      } catch (const DegenerateSeries&) {
        degenerate = true;
      }
      const double slope = fit_trend_slope(row.subspan(t + 1 - config.window, config.window));
      for (auto p : config.lags) {
        if (t + p >= len) continue;
        ForecastRecord r;
        r.node = i;
        r.origin = t;
        r.lag = p;
        r.predicted = row[t] + slope * static_cast<double>(p);
        r.actual = row[t + p];
        const double diff = r.predicted - r.actual;
        r.error = config.metric == ErrorMetric::absolute ? std::abs(diff) : diff * diff;
        r.h1 = h1;
        r.h2 = h2;
        r.degenerate = degenerate;
        out.push_back(r);
      }
    }
  });

  std::vector<ForecastRecord> records;
  for (auto& v : per_node) records.insert(records.end(), v.begin(), v.end());
  return records;
}

LogLinearFit fit_error_vs_hurst(std::span<const ForecastRecord> records, int q,
                                const ErrorFitOptions& options) {
  if (q != 1 && q != 2) throw InvalidConfig("q must be 1 or 2");
  LogLinearFit out;
  std::vector<double> h, log_e;
  for (const auto& r : records) {
    if (options.lag && r.lag != *options.lag) continue;
    if (r.degenerate) {
      ++out.excluded_degenerate;
      continue;
    }
    if (!(r.error > 0.0)) {
      ++out.excluded_zero_error;
      continue;
    }
    h.push_back(q == 1 ? r.h1 : r.h2);
    log_e.push_back(std::log10(r.error));
  }
  if (h.size() < 2) throw InsufficientData("fewer than two records with positive error");

  if (options.mode == FitMode::binned) {
    if (options.bins < 2) throw InvalidConfig("binned fit needs at least 2 bins");
    const auto [lo_it, hi_it] = std::minmax_element(h.begin(), h.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw InsufficientData("all Hurst values are identical");
    std::vector<std::vector<std::size_t>> members(options.bins);
    for (std::size_t i = 0; i < h.size(); ++i) {
      auto b = static_cast<std::size_t>((h[i] - lo) / (hi - lo) * static_cast<double>(options.bins));
      members[std::min(b, options.bins - 1)].push_back(i);
    }
    std::vector<double> bh, be;
    for (const auto& m : members) {
      if (m.empty()) continue;
      double mean_h = 0.0;
      std::vector<double> es;
      for (auto i : m) {
        mean_h += h[i];
        es.push_back(log_e[i]);
      }
      std::sort(es.begin(), es.end());
      const std::size_t mid = es.size() / 2;
      bh.push_back(mean_h / static_cast<double>(m.size()));
      be.push_back(es.size() % 2 ? es[mid] : 0.5 * (es[mid - 1] + es[mid]));
    }
    h = std::move(bh);
    log_e = std::move(be);
  }

  const auto fit = fit_line(h, log_e);
  out.c = fit.slope;
  out.e0 = std::pow(10.0, fit.intercept);
  out.r2 = fit.r2;
  out.n_points = fit.n;
  return out;
}

namespace {

SlopeCurve curve_from_records(const std::vector<ForecastRecord>& records,
                              const ForecastConfig& config, int q) {
  SlopeCurve curve;
  curve.q = q;
  curve.filtered = config.filtered;
  for (auto p : config.lags) {
    ErrorFitOptions opts;
    opts.lag = p;
    try {
      curve.points.push_back({p, fit_error_vs_hurst(records, q, opts)});
    } catch (const InsufficientData& e) {
      curve.skipped.emplace_back(p, e.what());
    }
  }
  return curve;
}

}  // namespace

SlopeCurve slope_vs_lag(const Panel& panel, const ForecastConfig& config, int q, unsigned threads) {
  if (q != 1 && q != 2) throw InvalidConfig("q must be 1 or 2");
  return curve_from_records(run_study(panel, config, threads), config, q);
}

SlopeComparison compare_slope_vs_lag(const Panel& panel, const ForecastConfig& config, int q,
                                     unsigned threads) {
  ForecastConfig raw = config;
  raw.filtered = false;
  ForecastConfig filt = config;
  filt.filtered = true;
  return {slope_vs_lag(panel, raw, q, threads), slope_vs_lag(panel, filt, q, threads)};
}

}  // namespace mscale
