#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace mscale {

enum class FbmOutput { path, increments };

/// Fractional Brownian motion with Hurst exponent `hurst`, unit-variance increments.
struct FbmSpec {
  double hurst = 0.5;
  std::size_t length = 1024;  // power of two, >= 64
  std::uint64_t seed = 0;
  FbmOutput output = FbmOutput::increments;
};

/// Randomized binomial multiplicative cascade over 2^depth cells.
struct CascadeSpec {
  double m0 = 0.6;  // in (0.5, 1)
  std::size_t depth = 14;
  std::uint64_t seed = 0;
};

struct SeasonalComponent {
  double period_hours = 24.0;
  double amplitude = 1.0;
};

/// Sum of cosines plus optional fractional Gaussian noise.
struct SeasonalSpec {
  std::vector<SeasonalComponent> components;
  /// Noise is the first `length` samples of this spec, whatever its own length.
  std::optional<FbmSpec> noise;
  std::size_t length = 1632;
};

/// fGn autocovariance gamma(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2.
double fgn_autocovariance(double hurst, std::size_t lag);

/// Exact-covariance fGn by circulant embedding; the path is its running sum.
/// Throws EmbeddingFailure if the embedding stays indefinite after three doublings.
std::vector<double> gen_fbm(const FbmSpec& spec);

/// First `length` samples of gen_fbm run at the smallest admissible power of
/// two >= length. Truncation keeps the covariance exact.
std::vector<double> gen_fbm_prefix(FbmSpec spec, std::size_t length);

/// Cell masses of the cascade; they sum to exactly 1 under pairwise
/// (tree-order) summation.
std::vector<double> gen_cascade(const CascadeSpec& spec);

/// Closed-form mass exponent tau(q) = -log2(m0^q + (1 - m0)^q).
double cascade_mass_exponent(double m0, double q);

std::vector<double> gen_seasonal(const SeasonalSpec& spec);

}  // namespace mscale
