#pragma once

#include <cstddef>
#include <span>

namespace mscale {

/// Ordinary least squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;  // clamped to [0, 1]; 1 when the residual is exactly zero
  std::size_t n = 0;
};

/// Requires at least two points with distinct x; throws InsufficientData otherwise.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mscale
