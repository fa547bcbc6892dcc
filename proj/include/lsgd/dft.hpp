#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lsgd::dft {

using Complex = std::complex<double>;

/// Forward DFT, X_k = sum_j x_j exp(-2 pi i jk/n). Iterative radix-2 for
/// power-of-two lengths, Bluestein's chirp-z for everything else.
std::vector<Complex> forward(std::span<const Complex> x);

/// Inverse DFT including the 1/n factor.
std::vector<Complex> inverse(std::span<const Complex> x);

std::vector<Complex> forward_real(std::span<const double> x);

}  // namespace lsgd::dft
