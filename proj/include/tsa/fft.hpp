#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tsa {

// Forward DFT of a real sequence; returns the n/2 + 1 non-redundant bins.
std::vector<std::complex<double>> rfft(std::span<const double> x);

// Inverse of rfft for an original length n (scaled by 1/n).
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

// Linear convolution of a and b, truncated to out_len samples. Both inputs
// are zero-padded to a common length of at least size(a) + size(b) so the
// circular product equals the linear one over the returned prefix.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b,
                                 std::size_t out_len);

}  // namespace tsa
