#include "lsgd/dft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace lsgd::dft {

namespace {

void radix2_inplace(std::vector<Complex>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (invert ? 1.0 : -1.0);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddles from direct trig evaluation; recurrences drift for large n.
        const Complex w = std::polar(1.0, ang * static_cast<double>(k));
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

// Unnormalized transform with sign -1 (forward) or +1 (backward).
std::vector<Complex> transform(std::span<const Complex> x, bool invert) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (std::has_single_bit(n)) {
    std::vector<Complex> a(x.begin(), x.end());
    radix2_inplace(a, invert);
    return a;
  }
  // Bluestein: jk = (j^2 + k^2 - (k-j)^2)/2 turns the DFT into a convolution.
  const double sign = invert ? 1.0 : -1.0;
  std::vector<Complex> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small.
    const auto k2 = static_cast<double>((static_cast<unsigned long long>(k) * k) % (2 * n));
    chirp[k] = std::polar(1.0, sign * std::numbers::pi * k2 / static_cast<double>(n));
  }
  const std::size_t m = std::bit_ceil(2 * n - 1);
  std::vector<Complex> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  radix2_inplace(a, false);
  radix2_inplace(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  radix2_inplace(a, true);
  const double scale = 1.0 / static_cast<double>(m);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

}  // namespace

std::vector<Complex> forward(std::span<const Complex> x) { return transform(x, false); }

std::vector<Complex> inverse(std::span<const Complex> x) {
  auto out = transform(x, true);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<Complex> forward_real(std::span<const double> x) {
  std::vector<Complex> c(x.begin(), x.end());
  return forward(c);
}

}  // namespace lsgd::dft
