#pragma once

// Synthetic panels shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mscale/panel.hpp"
#include "mscale/synth.hpp"

namespace mscale::fixture {

inline const HourStamp kStart = parse_timestamp("2014-01-01T00:00:00Z");

inline std::vector<NodeId> node_names(std::size_t n, const std::string& prefix = "n") {
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back({prefix + std::to_string(i), ComponentRole::MCC});
  return ids;
}

inline std::vector<double> fgn(double hurst, std::size_t length, std::uint64_t seed) {
  FbmSpec spec;
  spec.hurst = hurst;
  spec.seed = seed;
  return gen_fbm_prefix(spec, length);
}

/// Independent fGn nodes with a common Hurst exponent.
inline Panel fgn_panel(double hurst, std::size_t nodes, std::size_t length, std::uint64_t seed) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nodes; ++i) rows.push_back(fgn(hurst, length, seed * 1000 + i));
  return Panel::from_rows(node_names(nodes), kStart, rows);
}

/// fGn nodes with H drawn uniformly from [h_lo, h_hi], plus common-phase cosines.
inline Panel mixed_hurst_panel(std::size_t nodes, std::size_t length, std::uint64_t seed,
                               double h_lo, double h_hi,
                               const std::vector<SeasonalComponent>& seasonal = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(h_lo, h_hi);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nodes; ++i) {
    SeasonalSpec spec;
    spec.length = length;
    spec.components = seasonal;
    FbmSpec noise;
    noise.hurst = draw(rng);
    noise.seed = seed * 1000 + i;
    spec.noise = noise;
    rows.push_back(gen_seasonal(spec));
  }
  return Panel::from_rows(node_names(nodes), kStart, rows);
}

/// Common-phase seasonal cosines plus fGn with one Hurst exponent.
inline Panel seasonal_fgn_panel(std::size_t nodes, std::size_t length, std::uint64_t seed,
                                double hurst, const std::vector<SeasonalComponent>& seasonal) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nodes; ++i) {
    SeasonalSpec spec;
    spec.length = length;
    spec.components = seasonal;
    FbmSpec noise;
    noise.hurst = hurst;
    noise.seed = seed * 1000 + i;
    spec.noise = noise;
    rows.push_back(gen_seasonal(spec));
  }
  return Panel::from_rows(node_names(nodes), kStart, rows);
}

/// First `split` samples H = h_before, the rest H = h_after, independent per node.
inline Panel spliced_panel(std::size_t nodes, std::size_t length, std::size_t split,
                           double h_before, double h_after, std::uint64_t seed) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nodes; ++i) {
    auto a = fgn(h_before, split, seed * 1000 + 2 * i);
    auto b = fgn(h_after, length - split, seed * 1000 + 2 * i + 1);
    a.insert(a.end(), b.begin(), b.end());
    rows.push_back(std::move(a));
  }
  return Panel::from_rows(node_names(nodes), kStart, rows);
}

/// Harmonics at 24/12/8 h with total signal power `snr` times the unit noise variance.
inline Panel harmonic_noise_panel(std::size_t nodes, std::size_t length, double snr,
                                  std::uint64_t seed) {
  // Equal amplitudes; a cosine of amplitude A carries power A^2 / 2.
  const double amp = std::sqrt(2.0 * snr / 3.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nodes; ++i) {
    SeasonalSpec spec;
    spec.length = length;
    spec.components = {{24.0, amp}, {12.0, amp}, {8.0, amp}};
    auto row = gen_seasonal(spec);
    for (auto& v : row) v += noise(rng);
    rows.push_back(std::move(row));
  }
  return Panel::from_rows(node_names(nodes), kStart, rows);
}

inline Panel white_noise_panel(std::size_t nodes, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> rows(nodes, std::vector<double>(length));
  for (auto& r : rows)
    for (auto& v : r) v = noise(rng);
  return Panel::from_rows(node_names(nodes), kStart, rows);
}

inline Panel ramp_panel(std::size_t nodes, std::size_t length) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nodes; ++i) {
    std::vector<double> r(length);
    for (std::size_t t = 0; t < length; ++t)
      r[t] = static_cast<double>(i + 1) * static_cast<double>(t) + 3.0;
    rows.push_back(std::move(r));
  }
  return Panel::from_rows(node_names(nodes), kStart, rows);
}

}  // namespace mscale::fixture
