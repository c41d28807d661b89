// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mscale/forecast.hpp"
#include "mscale/ghe.hpp"
#include "mscale/parallel.hpp"
#include "mscale/rolling.hpp"
#include "mscale/spectral.hpp"
#include "mscale/synth.hpp"

using namespace mscale;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> fgn(double h, std::size_t length, std::uint64_t seed) {
  FbmSpec s;
  s.hurst = h;
  s.length = length;
  s.seed = seed;
  return gen_fbm(s);
}

constexpr std::size_t kLong = 1 << 14;
constexpr double kHursts[] = {0.3, 0.5, 0.7, 0.9};

Outcome fbm_recovery() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (double h : kHursts) {
    std::vector<double> h1, h2;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto r = estimate_ghe(fgn(h, kLong, seed), GheConfig{}, true);
      h1.push_back(r.hurst(1));
      h2.push_back(r.hurst(2));
    }
    const double m1 = oracle::mean(h1), m2 = oracle::mean(h2);
    o.require(std::abs(m1 - h) <= 0.05 && std::abs(m2 - h) <= 0.05,
              fmt("H=%.1f: H(1)=%.3f H(2)=%.3f", h, m1, m2));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 10.0, fmt("%.2f s", secs));
  return o;
}

Outcome scaling_discrimination() {
  Outcome o;
  GheConfig grid;
  grid.q_grid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  for (double h : kHursts) {
    std::vector<double> spread;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto r = estimate_ghe(fgn(h, kLong, 100 + seed), grid, true);
      double worst = 0.0;
      for (const auto& e : r.estimates) worst = std::max(worst, std::abs(e.hurst - r.hurst(1)));
      spread.push_back(worst);
    }
    o.require(oracle::mean(spread) < 0.05,
              fmt("fBm H=%.1f max|H(q)-H(1)|=%.3f", h, oracle::mean(spread)));
  }
  std::vector<double> gap, tau2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = gen_cascade({0.6, 14, seed});
    const auto r = estimate_ghe(m, GheConfig{}, true);
    gap.push_back(r.hurst(1) - r.hurst(2));
    tau2.push_back(oracle::partition_exponent(m, 2.0));
  }
  const double expected = -std::log2(0.52);
  o.require(oracle::mean(gap) > 0.02 && *std::min_element(gap.begin(), gap.end()) > 0.02,
            fmt("cascade H(1)-H(2) mean %.4f min %.4f", oracle::mean(gap),
                *std::min_element(gap.begin(), gap.end())));
  double worst_tau = 0.0;
  for (double t : tau2) worst_tau = std::max(worst_tau, std::abs(t - expected));
  o.require(worst_tau <= 0.05, fmt("tau(2) within %.2e of %.4f", worst_tau, expected));
  return o;
}

Outcome spectral_relation() {
  Outcome o;
  for (double h : kHursts) {
    std::vector<double> diff;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto r = spectral_exponent_check(fgn(h, kLong, 200 + seed), GheConfig{});
      diff.push_back(r.beta_spectral - r.beta_predicted);
    }
    o.require(std::abs(oracle::mean(diff)) <= 0.3,
              fmt("H=%.1f beta_s-beta_p=%+.3f", h, oracle::mean(diff)));
  }
  return o;
}

Outcome detrending() {
  Outcome o;
  const std::vector<std::size_t> windows{6, 7, 8, 9, 10, 11, 12};
  for (double h : kHursts) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      worst = std::max(worst,
                       detrending_robustness(fgn(h, kLong, 300 + seed), GheConfig{}, windows));
    o.require(worst < 0.10, fmt("H=%.1f worst %.3f", h, worst));
  }
  return o;
}

Outcome seasonality() {
  Outcome o;
  const auto panel = fixture::harmonic_noise_panel(20, 1632, 10.0, 17);
  const auto rep = market_average_spectrum(panel);
  std::vector<double> periods;
  for (const auto& p : rep.peaks) periods.push_back(p.label.value_or(p.period_hours));
  o.require(periods == std::vector<double>{24.0, 12.0, 8.0},
            fmt("%zu peaks flagged", rep.peaks.size()));

  FilterSpec spec;
  spec.periods_hours = {};
  for (const auto& p : rep.peaks) spec.periods_hours.push_back(p.period_hours);
  const auto filtered = filter_panel(panel, spec);
  const auto after = market_average_spectrum(filtered);
  double worst = 0.0;
  for (const auto& p : rep.peaks)
    worst = std::max(worst, after.mean_power[p.bin] / rep.mean_power[p.bin]);
  o.require(worst < 0.01, fmt("residual power %.1e", worst));

  double drift = 0.0;
  const auto twice = filter_panel(filtered, spec);
  for (std::size_t i = 0; i < panel.node_count(); ++i)
    for (std::size_t t = 0; t < panel.length(); ++t)
      drift = std::max(drift, std::abs(twice.row(i)[t] - filtered.row(i)[t]));
  o.require(drift <= 1e-12, fmt("idempotence %.1e", drift));
  return o;
}

Outcome rolling_dynamics() {
  Outcome o;
  const std::size_t points = rolling_trace_length(1632, 50, 1);
  const auto base = rolling_ghe(fixture::fgn_panel(0.7, 2, 1632, 1), RollingConfig{});
  o.require(points == 1583 && base.size() == 1583, fmt("%zu trace points", base.size()));

  std::size_t good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RollingConfig cfg;
    cfg.stride = 25;
    const auto trace = rolling_ghe(fixture::spliced_panel(64, 1632, 800, 0.5, 0.9, seed), cfg);
    const auto regions = group_shifts(detect_shifts(trace, 1.0), cfg.window);
    if (regions.size() == 1 && regions[0].first + 50 >= 800 && regions[0].last <= 850) ++good;
  }
  o.require(good == 10, fmt("splice: one region near t=800 in %zu/10 seeds", good));

  std::size_t smaller = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto panel = fixture::seasonal_fgn_panel(128, 1632, 500 + seed, 0.7,
                                                   {{24.0, 4.0}, {12.0, 2.0}, {8.0, 4.0 / 3.0}});
    RollingConfig raw, filt;
    filt.filtered = true;
    const double s_raw = temporal_std(rolling_ghe(panel, raw), 1.0);
    const double s_filt = temporal_std(rolling_ghe(panel, filt), 1.0);
    if (s_filt < s_raw) ++smaller;
  }
  o.require(smaller == 10, fmt("filtered std smaller in %zu/10 seeds", smaller));
  return o;
}

Outcome forecast_sign() {
  Outcome o;
  std::size_t negative = 0;
  std::string cs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto panel = fixture::mixed_hurst_panel(20, 1632, 700 + seed, 0.3, 0.9);
    const auto fit = fit_error_vs_hurst(run_study(panel, ForecastConfig{}), 1);
    if (fit.c < 0.0) ++negative;
    cs += fmt("%s%.2f", cs.empty() ? "" : " ", fit.c);
  }
  o.require(negative >= 9, fmt("c<0 in %zu/10 seeds (c: %s)", negative, cs.c_str()));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double e0 = 0.05 + 5.0 * u(rng), c = -4.0 + 8.0 * u(rng);
    std::vector<ForecastRecord> recs;
    for (int k = 0; k < 100; ++k) {
      ForecastRecord r;
      r.h1 = r.h2 = 0.1 + 0.8 * u(rng);
      r.error = e0 * std::pow(10.0, c * r.h1);
      recs.push_back(r);
    }
    const auto f = fit_error_vs_hurst(recs, 1);
    worst = std::max({worst, std::abs(f.c - c), std::abs(f.e0 - e0) / e0});
  }
  o.require(worst <= 1e-9, fmt("exact-fit recovery %.1e", worst));
  return o;
}

Outcome filtered_ordering() {
  Outcome o;
  const std::size_t lags[] = {1, 6, 12};
  std::size_t wins[3] = {0, 0, 0};
  ForecastConfig cfg;
  cfg.lags = {1, 6, 12};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto panel = fixture::mixed_hurst_panel(16, 1632, 900 + seed, 0.3, 0.9,
                                                  {{24.0, 1.0}, {12.0, 0.5}, {8.0, 1.0 / 3.0}});
    const auto cmp = compare_slope_vs_lag(panel, cfg, 1);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto find = [&](const SlopeCurve& c) {
        for (const auto& p : c.points)
          if (p.lag == lags[k]) return p.fit.c;
        return std::nan("");
      };
      if (find(cmp.filtered) >= find(cmp.unfiltered)) ++wins[k];
    }
  }
  for (std::size_t k = 0; k < 3; ++k)
    o.require(wins[k] >= 6, fmt("p=%zu filtered>=unfiltered %zu/10", lags[k], wins[k]));
  return o;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

Outcome determinism() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 63;
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    const double q = 0.5 + 0.5 * static_cast<double>(trial % 6);
    for (std::size_t tau = 1; tau < n; ++tau) {
      const double ref = oracle::structure_function(x, q, tau);
      worst = std::max(worst, std::abs(structure_function(x, q, tau) - ref) / ref);
    }
  }
  o.require(worst <= 1e-12, fmt("structure function rel err %.1e", worst));

  const unsigned many = std::max(4u, default_threads());
  const auto panel = fixture::seasonal_fgn_panel(8, 1632, 3, 0.6, {{24.0, 1.0}});
  bool same = true;
  {
    GheConfig cfg;
    cfg.q_grid = {0.5, 1.0, 2.0, 3.0};
    const auto a = multiscaling_report(panel, cfg, true, 1);
    const auto b = multiscaling_report(panel, cfg, true, many);
    same = same && same_bits(a.mean_qH, b.mean_qH) && same_bits(a.min_qH, b.min_qH) &&
           same_bits(a.max_qH, b.max_qH);
  }
  {
    const auto a = market_average_spectrum(panel, {}, 1);
    const auto b = market_average_spectrum(panel, {}, many);
    same = same && same_bits(a.mean_power, b.mean_power);
  }
  {
    RollingConfig cfg;
    cfg.filtered = true;
    const auto a = rolling_ghe(panel, cfg, 1), b = rolling_ghe(panel, cfg, many);
    for (std::size_t q = 0; q < a.q_grid.size(); ++q)
      same = same && same_bits(a.mean_h[q], b.mean_h[q]) && same_bits(a.std_h[q], b.std_h[q]);
  }
  {
    ForecastConfig cfg;
    cfg.lags = {1, 6};
    const auto a = compare_slope_vs_lag(panel, cfg, 2, 1);
    const auto b = compare_slope_vs_lag(panel, cfg, 2, many);
    for (std::size_t k = 0; k < a.unfiltered.points.size(); ++k)
      same = same && a.unfiltered.points[k].fit.c == b.unfiltered.points[k].fit.c &&
             a.filtered.points[k].fit.c == b.filtered.points[k].fit.c &&
             a.filtered.points[k].fit.e0 == b.filtered.points[k].fit.e0;
  }
  o.require(same, fmt("1 vs %u threads bit-identical", many));

  FbmSpec f;
  f.hurst = 0.7;
  f.length = kLong;
  f.seed = 1;
  SeasonalSpec s;
  s.components = {{24.0, 1.0}, {12.0, 0.5}};
  s.noise = f;
  const bool gens = same_bits(gen_fbm(f), gen_fbm(f)) &&
                    same_bits(gen_cascade({0.6, 14, 3}), gen_cascade({0.6, 14, 3})) &&
                    same_bits(gen_seasonal(s), gen_seasonal(s));
  o.require(gens, "seeded generators bit-identical");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 fBm recovery", fbm_recovery},
      {"2 uni- vs multi-scaling", scaling_discrimination},
      {"3 spectral relation", spectral_relation},
      {"4 detrending robustness", detrending},
      {"5 seasonality pipeline", seasonality},
      {"6 rolling dynamics", rolling_dynamics},
      {"7 forecast sign", forecast_sign},
      {"8 filtered vs unfiltered", filtered_ordering},
      {"9 determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s  #%s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
