#pragma once

#include <cstddef>
#include <vector>

#include "mscale/ghe.hpp"
#include "mscale/panel.hpp"
#include "mscale/spectral.hpp"

namespace mscale {

struct RollingConfig {
  std::size_t window = 50;
  std::size_t stride = 1;
  GheConfig ghe = windowed_ghe_defaults();
  /// Notch-filter each full series before windowing.
  bool filtered = false;
  FilterSpec filter;
  /// Keep the node x window matrix of estimates in the trace.
  bool keep_per_node = false;

  void validate(std::size_t series_length) const;
};

/// Cross-node statistics of H(q) per window. Windows in which every node is
/// degenerate hold NaN.
struct RollingTrace {
  std::vector<std::size_t> window_ends;  // inclusive end index of each window
  std::vector<double> q_grid;
  std::vector<std::vector<double>> mean_h;  // [q][window]
  std::vector<std::vector<double>> std_h;   // [q][window], population std
  std::vector<std::size_t> valid_nodes;     // per window
  /// [q][node][window], NaN for degenerate windows. Empty unless requested.
  std::vector<std::vector<std::vector<double>>> per_node;

  std::size_t size() const { return window_ends.size(); }
  std::size_t q_index(double q) const;
};

/// Number of windows: floor((T - window) / stride) + 1.
std::size_t rolling_trace_length(std::size_t series_length, std::size_t window, std::size_t stride);

/// GHE on every window [t - window + 1, t] of every node, cumsum taken per window.
RollingTrace rolling_ghe(const Panel& panel, const RollingConfig& config, unsigned threads = 0);

struct Shift {
  std::size_t time = 0;  // window end where the jump lands
  double jump = 0.0;     // mean_H(t) - mean_H(previous point)
};

/// Consecutive trace points whose mean H(q) differs by more than `threshold`.
std::vector<Shift> detect_shifts(const RollingTrace& trace, double q, double threshold = 0.1);

struct ShiftRegion {
  std::size_t first = 0;
  std::size_t last = 0;
  double largest_jump = 0.0;  // signed jump with the largest magnitude
};

/// Merges shifts whose times are at most `max_gap` apart into regions.
std::vector<ShiftRegion> group_shifts(const std::vector<Shift>& shifts, std::size_t max_gap);

/// Standard deviation over time of mean H(q), ignoring gaps.
double temporal_std(const RollingTrace& trace, double q);

}  // namespace mscale
