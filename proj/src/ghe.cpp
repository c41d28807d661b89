#include "mscale/ghe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mscale/error.hpp"
#include "mscale/parallel.hpp"
#include "mscale/regression.hpp"
#include "mscale/spectral.hpp"

namespace mscale {

namespace {

double abs_pow(double d, double q) {
  if (q == 1.0) return d;
  if (q == 2.0) return d * d;
  return std::pow(d, q);
}

double mean_abs_moment(std::span<const double> x, double q) {
  double acc = 0.0;
  for (double v : x) acc += abs_pow(std::abs(v), q);
  return acc / static_cast<double>(x.size());
}

// sums[iq][il] = mean over t of |x(t + lag) - x(t)|^q
std::vector<std::vector<double>> increment_moments(std::span<const double> x,
                                                   std::span<const std::size_t> lags,
                                                   std::span<const double> qs) {
  std::vector<std::vector<double>> out(qs.size(), std::vector<double>(lags.size(), 0.0));
  std::vector<double> acc(qs.size());
  for (std::size_t il = 0; il < lags.size(); ++il) {
    const std::size_t tau = lags[il];
    const std::size_t count = x.size() - tau;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t t = 0; t < count; ++t) {
      const double d = std::abs(x[t + tau] - x[t]);
      for (std::size_t iq = 0; iq < qs.size(); ++iq) acc[iq] += abs_pow(d, qs[iq]);
    }
    for (std::size_t iq = 0; iq < qs.size(); ++iq)
      out[iq][il] = acc[iq] / static_cast<double>(count);
  }
  return out;
}

void check_tau_max(std::size_t tau_max, std::size_t nu, std::size_t length) {
  if (tau_max < 2) throw InvalidConfig("tau_max must be at least 2");
  if (tau_max < 2 * nu)
    throw InvalidConfig("tau_max must allow at least two lags (tau_max >= 2 nu)");
  if (2 * tau_max >= length)
    throw SeriesTooShort("series of length " + std::to_string(length) +
                         " is too short for tau_max " + std::to_string(tau_max) +
                         " (need length > 2 tau_max)");
}

}  // namespace

void GheConfig::validate(std::size_t series_length) const {
  if (q_grid.empty()) throw InvalidConfig("q grid is empty");
  for (double q : q_grid)
    if (!(q > 0.0) || !std::isfinite(q)) throw InvalidConfig("every q must be positive");
  if (nu < 1) throw InvalidConfig("nu must be at least 1 sample");
  check_tau_max(tau_max, nu, series_length);
  for (auto t : tau_max_sweep) check_tau_max(t, nu, series_length);
  if (detrend && (*detrend < 2 || *detrend > series_length))
    throw InvalidConfig("detrend window must lie in [2, series length]");
}

double GheResult::hurst(double q) const {
  for (const auto& e : estimates)
    if (e.q == q) return e.hurst;
  throw OutOfRange("q = " + std::to_string(q) + " is not in the estimated grid");
}

double structure_function(std::span<const double> x, double q, std::size_t tau) {
  if (!(q > 0.0)) throw InvalidConfig("q must be positive");
  if (tau < 1 || tau >= x.size()) throw OutOfRange("tau must lie in [1, len(x) - 1]");
  const double denom = mean_abs_moment(x, q);
  if (denom == 0.0) throw DegenerateSeries("structure function denominator is zero");
  const std::size_t lag[] = {tau};
  const double qs[] = {q};
  return increment_moments(x, lag, qs)[0][0] / denom;
}

std::vector<double> detrend_windows(std::span<const double> x, std::size_t window) {
  if (window < 2) throw InvalidConfig("detrend window must be at least 2");
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t start = 0; start < x.size(); start += window) {
    const std::size_t len = std::min(window, x.size() - start);
    if (len < 2) continue;
    const double tbar = 0.5 * static_cast<double>(len - 1);
    double ybar = 0.0;
    for (std::size_t k = 0; k < len; ++k) ybar += x[start + k];
    ybar /= static_cast<double>(len);
    double sty = 0.0, stt = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      const double dt = static_cast<double>(k) - tbar;
      sty += dt * (x[start + k] - ybar);
      stt += dt * dt;
    }
    const double slope = sty / stt;
    for (std::size_t k = 0; k < len; ++k)
      out[start + k] -= slope * (static_cast<double>(k) - tbar);
  }
  return out;
}

GheResult estimate_ghe(std::span<const double> series, const GheConfig& config,
                       bool apply_cumsum) {
  config.validate(series.size());

  std::vector<double> x = apply_cumsum ? cumulative_sum(series)
                                       : std::vector<double>(series.begin(), series.end());
  for (double v : x)
    if (!std::isfinite(v)) throw DegenerateSeries("series contains non-finite values");
  if (config.detrend) x = detrend_windows(x, *config.detrend);

  std::vector<std::size_t> fits = config.tau_max_sweep;
  if (fits.empty()) fits.push_back(config.tau_max);
  const std::size_t largest = std::max(config.tau_max, *std::max_element(fits.begin(), fits.end()));

  GheResult result;
  for (std::size_t tau = config.nu; tau <= largest; tau += config.nu) result.lags.push_back(tau);
  std::vector<double> log_lag(result.lags.size());
  for (std::size_t i = 0; i < result.lags.size(); ++i)
    log_lag[i] = std::log(static_cast<double>(result.lags[i]) / static_cast<double>(config.nu));

  const auto numerators = increment_moments(x, result.lags, config.q_grid);

  for (std::size_t iq = 0; iq < config.q_grid.size(); ++iq) {
    const double q = config.q_grid[iq];
    QEstimate est;
    est.q = q;
    est.denominator = mean_abs_moment(x, q);
    if (est.denominator == 0.0)
      throw DegenerateSeries("structure function denominator is zero");
    est.structure.resize(result.lags.size());
    std::vector<double> log_k(result.lags.size());
    for (std::size_t il = 0; il < result.lags.size(); ++il) {
      est.structure[il] = numerators[iq][il] / est.denominator;
      if (!(est.structure[il] > 0.0))
        throw DegenerateSeries("K_q(tau) vanishes at tau = " + std::to_string(result.lags[il]));
      log_k[il] = std::log(est.structure[il]);
    }

    std::vector<double> h_values;
    double r2_sum = 0.0;
    for (std::size_t tmax : fits) {
      const std::size_t used = tmax / config.nu;
      auto fit = fit_line(std::span(log_lag).first(used), std::span(log_k).first(used));
      h_values.push_back(fit.slope / q);
      r2_sum += fit.r2;
    }
    double mean = 0.0;
    for (double h : h_values) mean += h;
    mean /= static_cast<double>(h_values.size());
    double var = 0.0;
    for (double h : h_values) var += (h - mean) * (h - mean);
    est.hurst = mean;
    est.sweep_std = std::sqrt(var / static_cast<double>(h_values.size()));
    est.fit_r2 = r2_sum / static_cast<double>(fits.size());
    result.estimates.push_back(std::move(est));
  }
  return result;
}

MultiScalingReport multiscaling_report(const Panel& panel, const GheConfig& config,
                                       bool apply_cumsum, unsigned threads) {
  config.validate(panel.length());

  GheConfig extended = config;
  for (double q : {1.0, 2.0})
    if (std::find(extended.q_grid.begin(), extended.q_grid.end(), q) == extended.q_grid.end())
      extended.q_grid.push_back(q);

  const std::size_t n = panel.node_count();
  MultiScalingReport report;
  report.q_grid = config.q_grid;
  report.per_node.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      report.per_node[i] = estimate_ghe(panel.row(i), extended, apply_cumsum);
    } catch (const DegenerateSeries&) {
      report.per_node[i].reset();
    }
  });

  const std::size_t nq = config.q_grid.size();
  report.mean_qH.assign(nq, 0.0);
  report.min_qH.assign(nq, std::numeric_limits<double>::infinity());
  report.max_qH.assign(nq, -std::numeric_limits<double>::infinity());
  double gap = 0.0;
  for (const auto& res : report.per_node) {
    if (!res) {
      ++report.skipped_series;
      continue;
    }
    ++report.used_series;
    for (std::size_t iq = 0; iq < nq; ++iq) {
      const double qh = config.q_grid[iq] * res->estimates[iq].hurst;
      report.mean_qH[iq] += qh;
      report.min_qH[iq] = std::min(report.min_qH[iq], qh);
      report.max_qH[iq] = std::max(report.max_qH[iq], qh);
    }
    gap += res->hurst(1.0) - res->hurst(2.0);
  }
  if (report.used_series == 0)
    throw AllSeriesDegenerate("every series in the panel is degenerate");
  const double used = static_cast<double>(report.used_series);
  for (auto& m : report.mean_qH) m /= used;
  // Keep min <= mean <= max despite rounding in the mean.
  for (std::size_t iq = 0; iq < nq; ++iq)
    report.mean_qH[iq] = std::clamp(report.mean_qH[iq], report.min_qH[iq], report.max_qH[iq]);
  report.concavity_gap = gap / used;
  return report;
}

SpectralExponent spectral_exponent_check(std::span<const double> series, const GheConfig& config,
                                         bool apply_cumsum, SpectralBand band) {
  if (!(band.low > 0.0) || !(band.high > band.low) || band.high > 0.5)
    throw InvalidConfig("spectral band must satisfy 0 < low < high <= 0.5");

  GheConfig h2_config = config;
  h2_config.q_grid = {2.0};
  const auto ghe = estimate_ghe(series, h2_config, apply_cumsum);

  std::vector<double> x = apply_cumsum ? cumulative_sum(series)
                                       : std::vector<double>(series.begin(), series.end());
  const std::size_t len = x.size();
  const double first = x.front();
  const double rise = x.back() - x.front();
  for (std::size_t t = 0; t < len; ++t)
    x[t] -= first + rise * static_cast<double>(t) / static_cast<double>(len - 1);

  const auto power = power_spectrum(x);
  const auto peaks = find_peaks(power, len);
  std::vector<double> log_f, log_p;
  for (std::size_t k = 1; k < power.size(); ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(len);
    if (f < band.low || f > band.high || !(power[k] > 0.0)) continue;
    if (std::any_of(peaks.begin(), peaks.end(), [&](const SpectralPeak& p) { return p.bin == k; }))
      continue;
    log_f.push_back(std::log(f));
    log_p.push_back(std::log(power[k]));
  }
  if (log_f.size() < 3)
    throw SeriesTooShort("too few spectral bins in the fit band for a series of length " +
                         std::to_string(len));
  const auto fit = fit_line(log_f, log_p);

  SpectralExponent out;
  out.beta_spectral = -fit.slope;
  out.hurst2 = ghe.estimates.front().hurst;
  out.beta_predicted = 1.0 + 2.0 * out.hurst2;
  out.fitted_bins = log_f.size();
  return out;
}

double detrending_robustness(std::span<const double> series, const GheConfig& config,
                             std::span<const std::size_t> windows, bool apply_cumsum) {
  for (auto w : windows)
    if (w < 2 || w > series.size() / 4)
      throw InvalidConfig("detrend window " + std::to_string(w) +
                          " outside [2, series length / 4]");
  if (windows.empty()) return 0.0;

  GheConfig raw_config = config;
  raw_config.detrend.reset();
  const auto raw = estimate_ghe(series, raw_config, apply_cumsum);

  double worst = 0.0;
  for (auto w : windows) {
    GheConfig cfg = config;
    cfg.detrend = w;
    const auto det = estimate_ghe(series, cfg, apply_cumsum);
    for (std::size_t iq = 0; iq < raw.estimates.size(); ++iq) {
      const double h0 = raw.estimates[iq].hurst;
      if (h0 == 0.0) throw DegenerateSeries("raw Hurst exponent is zero; relative change undefined");
      worst = std::max(worst, std::abs(det.estimates[iq].hurst - h0) / std::abs(h0));
    }
  }
  return worst;
}

}  // namespace mscale
