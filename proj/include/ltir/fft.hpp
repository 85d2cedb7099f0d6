#pragma once

#include <complex>
#include <vector>

namespace ltir::fft {

// Forward DFT, X_k = sum_n x_n exp(-2*pi*i*k*n/N).
std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x);

// Inverse DFT including the 1/N factor.
std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& x);

std::vector<std::complex<double>> forward_real(const std::vector<double>& x);

} // namespace ltir::fft
