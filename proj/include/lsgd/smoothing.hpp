#pragma once

// Periodic 1-D Laplacian smoothing operator A = I - sigma * L.
//
// For n >= 3 the dense form has 1 + 2 sigma on the diagonal and -sigma on the
// sub/super diagonals and in the two periodic corners. At n = 2 the left and
// right neighbours coincide; the operator is then [[1+s, -s], [-s, 1+s]]
// (L = [[-1, 1], [1, -1]]), with spectrum {1, 1 + 2 sigma}.

#include <cstddef>
#include <span>
#include <vector>

#include "lsgd/linalg.hpp"

namespace lsgd {

struct SmootherSpectrum {
  /// values[k] is the eigenvalue of A on the k-th Fourier mode.
  std::vector<double> values;
};

/// Scratch buffers for allocation-free Thomas solves in hot loops.
struct ThomasWorkspace {
  std::vector<double> cprime, z, q;
  /// First column of A^{-1}, used by solve_paired.
  std::vector<double> kernel;
};

class CirculantSmoother {
 public:
  /// Throws DomainError for n < 2 or sigma < 0 (or non-finite).
  CirculantSmoother(std::size_t n, double sigma);

  std::size_t n() const noexcept { return n_; }
  double sigma() const noexcept { return sigma_; }

  DenseMatrix dense() const;
  SmootherSpectrum spectrum() const;

  Vector apply(const Vector& x) const;

  /// A^{-1} y by dividing Fourier coefficients by the real spectrum.
  Vector solve_dft(const Vector& y) const;

  /// A^{-1} y in O(n): Thomas sweeps on the tridiagonal part plus a
  /// Sherman-Morrison correction for the periodic corners.
  Vector solve_thomas(const Vector& y) const;
  void solve_thomas(std::span<const double> y, std::span<double> out, ThomasWorkspace& ws) const;

  /// First column g of A^{-1}, symmetrized so that g[d] == g[n - d] exactly.
  std::vector<double> inverse_kernel() const;

  /// A^{-1} y as the circulant convolution with inverse_kernel(), summing
  /// g[d] (y[i-d] + y[i+d]) pairwise. O(n^2), but exactly equivariant under
  /// the reflection i -> n-2-i (mod n): antisymmetric and symmetric inputs
  /// give bitwise antisymmetric and symmetric outputs.
  Vector solve_paired(const Vector& y) const;
  void solve_paired(std::span<const double> y, std::span<double> out, ThomasWorkspace& ws) const;

  /// A^{-1/2} x via per-mode factors value_k^{-1/2}.
  Vector inv_sqrt_apply(const Vector& x) const;

 private:
  Vector spectral_apply(const Vector& x, double exponent) const;

  std::size_t n_;
  double sigma_;
};

}  // namespace lsgd
