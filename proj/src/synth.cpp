#include "mscale/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "mscale/error.hpp"
#include "mscale/fft.hpp"

namespace mscale {

double fgn_autocovariance(double hurst, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

std::vector<double> gen_fbm(const FbmSpec& spec) {
  if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) throw InvalidConfig("fBm Hurst must lie in (0, 1)");
  if (spec.length < 64 || !std::has_single_bit(spec.length))
    throw InvalidConfig("fBm length must be a power of two >= 64");

  const std::size_t n = spec.length;
  std::vector<double> eigen;
  std::size_t half = n;  // the circulant has size 2 * half
  bool ok = false;
  for (int attempt = 0; attempt <= 3 && !ok; ++attempt, half *= 2) {
    const std::size_t m = 2 * half;
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k <= half; ++k) row[k] = fgn_autocovariance(spec.hurst, k);
    for (std::size_t k = half + 1; k < m; ++k) row[k] = row[m - k];
    auto lambda = fft::forward(row);
    eigen.resize(m);
    double largest = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      eigen[k] = lambda[k].real();
      largest = std::max(largest, std::abs(eigen[k]));
    }
    ok = true;
    for (auto& e : eigen) {
      if (e < -1e-10 * largest) {
        ok = false;
        break;
      }
      if (e < 0.0) e = 0.0;
    }
    if (ok) break;
  }
  if (!ok) throw EmbeddingFailure("circulant embedding is not nonnegative definite");

  const std::size_t m = eigen.size();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    w[k] = std::sqrt(eigen[k] / static_cast<double>(m)) * std::complex<double>(re, im);
  }
  const auto z = fft::forward(w);

  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = z[t].real();
  if (spec.output == FbmOutput::path) {
    double acc = 0.0;
    for (auto& v : out) {
      acc += v;
      v = acc;
    }
  }
  return out;
}

std::vector<double> gen_fbm_prefix(FbmSpec spec, std::size_t length) {
  if (length == 0) throw InvalidConfig("fBm prefix length must be positive");
  spec.length = std::bit_ceil(std::max<std::size_t>(length, 64));
  auto full = gen_fbm(spec);
  full.resize(length);
  return full;
}

std::vector<double> gen_cascade(const CascadeSpec& spec) {
  if (!(spec.m0 >= 0.5 && spec.m0 < 1.0)) throw InvalidConfig("cascade m0 must lie in [0.5, 1)");
  if (spec.depth < 6 || spec.depth > 30) throw InvalidConfig("cascade depth must lie in [6, 30]");

  std::mt19937_64 rng(spec.seed);
  std::vector<double> mass{1.0};
  for (std::size_t level = 0; level < spec.depth; ++level) {
    std::vector<double> next(mass.size() * 2);
    for (std::size_t i = 0; i < mass.size(); ++i) {
      // big + small == parent exactly: small = parent - big is exact by
      // Sterbenz because big lies in [parent / 2, parent].
      const double big = mass[i] * spec.m0;
      const double small = mass[i] - big;
      const bool big_left = (rng() & 1u) != 0;
      next[2 * i] = big_left ? big : small;
      next[2 * i + 1] = big_left ? small : big;
    }
    mass = std::move(next);
  }
  return mass;
}

double cascade_mass_exponent(double m0, double q) {
  return -std::log2(std::pow(m0, q) + std::pow(1.0 - m0, q));
}

std::vector<double> gen_seasonal(const SeasonalSpec& spec) {
  if (spec.length < 2) throw InvalidConfig("seasonal length must be at least 2");
  for (const auto& c : spec.components) {
    if (!(c.amplitude >= 0.0)) throw InvalidConfig("seasonal amplitudes must be nonnegative");
    if (!(c.period_hours > 0.0)) throw InvalidConfig("seasonal periods must be positive");
  }
  std::vector<double> out(spec.length, 0.0);
  for (const auto& c : spec.components) {
    const double w = 2.0 * std::numbers::pi / c.period_hours;
    for (std::size_t t = 0; t < spec.length; ++t)
      out[t] += c.amplitude * std::cos(w * static_cast<double>(t));
  }
  if (spec.noise) {
    const auto noise = gen_fbm_prefix(*spec.noise, spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) out[t] += noise[t];
  }
  return out;
}

}  // namespace mscale
