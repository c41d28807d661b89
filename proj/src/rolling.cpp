#include "mscale/rolling.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mscale/error.hpp"
#include "mscale/parallel.hpp"

namespace mscale {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void RollingConfig::validate(std::size_t series_length) const {
  if (window < 8) throw WindowTooSmall("rolling window must be at least 8 samples");
  if (stride < 1) throw InvalidConfig("stride must be at least 1");
  if (series_length <= window)
    throw WindowTooSmall("series of length " + std::to_string(series_length) +
                         " is not longer than the window " + std::to_string(window));
  if (2 * ghe.tau_max >= window)
    throw InvalidConfig("tau_max must be below half the rolling window");
  ghe.validate(window);
}

std::size_t RollingTrace::q_index(double q) const {
  for (std::size_t i = 0; i < q_grid.size(); ++i)
    if (q_grid[i] == q) return i;
  throw OutOfRange("q = " + std::to_string(q) + " is not in the trace");
}

std::size_t rolling_trace_length(std::size_t series_length, std::size_t window, std::size_t stride) {
  if (series_length < window || stride == 0) return 0;
  return (series_length - window) / stride + 1;
}

RollingTrace rolling_ghe(const Panel& panel, const RollingConfig& config, unsigned threads) {
  config.validate(panel.length());
  const Panel source = config.filtered ? filter_panel(panel, config.filter, threads) : panel;

  const std::size_t n = source.node_count();
  const std::size_t windows = rolling_trace_length(source.length(), config.window, config.stride);
  const std::size_t nq = config.ghe.q_grid.size();

  // estimates[node][window * nq + iq]
  std::vector<std::vector<double>> estimates(n, std::vector<double>(windows * nq, kNaN));
  parallel_for(n, threads, [&](std::size_t i) {
    const auto row = source.row(i);
    for (std::size_t w = 0; w < windows; ++w) {
      const auto slice = row.subspan(w * config.stride, config.window);
      try {
        const auto res = estimate_ghe(slice, config.ghe, true);
        for (std::size_t iq = 0; iq < nq; ++iq) estimates[i][w * nq + iq] = res.estimates[iq].hurst;
      } catch (const DegenerateSeries&) {
        // gap: left as NaN
      }
    }
  });

  RollingTrace trace;
  trace.q_grid = config.ghe.q_grid;
  trace.window_ends.resize(windows);
  for (std::size_t w = 0; w < windows; ++w)
    trace.window_ends[w] = w * config.stride + config.window - 1;
  trace.mean_h.assign(nq, std::vector<double>(windows, kNaN));
  trace.std_h.assign(nq, std::vector<double>(windows, kNaN));
  trace.valid_nodes.assign(windows, 0);

  for (std::size_t w = 0; w < windows; ++w) {
    for (std::size_t iq = 0; iq < nq; ++iq) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double h = estimates[i][w * nq + iq];
        if (std::isnan(h)) continue;
        sum += h;
        ++count;
      }
      if (iq == 0) trace.valid_nodes[w] = count;
      if (count == 0) continue;
      const double mean = sum / static_cast<double>(count);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double h = estimates[i][w * nq + iq];
        if (!std::isnan(h)) ss += (h - mean) * (h - mean);
      }
      trace.mean_h[iq][w] = mean;
      trace.std_h[iq][w] = std::sqrt(ss / static_cast<double>(count));
    }
  }

  if (config.keep_per_node) {
    trace.per_node.assign(nq, std::vector<std::vector<double>>(n, std::vector<double>(windows)));
    for (std::size_t iq = 0; iq < nq; ++iq)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t w = 0; w < windows; ++w) trace.per_node[iq][i][w] = estimates[i][w * nq + iq];
  }
  return trace;
}

std::vector<Shift> detect_shifts(const RollingTrace& trace, double q, double threshold) {
  const auto& mean = trace.mean_h[trace.q_index(q)];
  std::vector<Shift> shifts;
  for (std::size_t w = 1; w < mean.size(); ++w) {
    if (std::isnan(mean[w]) || std::isnan(mean[w - 1])) continue;
    const double jump = mean[w] - mean[w - 1];
    if (std::abs(jump) > threshold) shifts.push_back({trace.window_ends[w], jump});
  }
  return shifts;
}

std::vector<ShiftRegion> group_shifts(const std::vector<Shift>& shifts, std::size_t max_gap) {
  std::vector<ShiftRegion> regions;
  for (const auto& s : shifts) {
    if (!regions.empty() && s.time - regions.back().last <= max_gap) {
      auto& r = regions.back();
      r.last = s.time;
      if (std::abs(s.jump) > std::abs(r.largest_jump)) r.largest_jump = s.jump;
    } else {
      regions.push_back({s.time, s.time, s.jump});
    }
  }
  return regions;
}

double temporal_std(const RollingTrace& trace, double q) {
  const auto& mean = trace.mean_h[trace.q_index(q)];
  double sum = 0.0;
  std::size_t count = 0;
  for (double m : mean)
    if (!std::isnan(m)) {
      sum += m;
      ++count;
    }
  if (count == 0) throw InsufficientData("trace has no valid points");
  const double mu = sum / static_cast<double>(count);
  double ss = 0.0;
  for (double m : mean)
    if (!std::isnan(m)) ss += (m - mu) * (m - mu);
  return std::sqrt(ss / static_cast<double>(count));
}

}  // namespace mscale
