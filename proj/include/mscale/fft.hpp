#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Thin FFTW wrappers. Plan creation is serialized internally, so these are
// safe to call from concurrent workers.
namespace mscale::fft {

/// One-sided transform of a real series: T/2 + 1 bins, unnormalized.
std::vector<std::complex<double>> forward_real(std::span<const double> x);

/// Inverse of forward_real for a length-T series, normalized by 1/T.
std::vector<double> inverse_real(std::span<const std::complex<double>> bins, std::size_t length);

/// Unnormalized forward complex transform.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);

}  // namespace mscale::fft
