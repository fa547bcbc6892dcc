#pragma once

#include <vector>

#include "lsgd/linalg.hpp"

namespace lsgd {

/// Eigenpairs of the non-symmetric product A_sigma^{-1} B for symmetric B.
///
/// A_sigma^{-1} B is similar to the symmetric A^{-1/2} B A^{-1/2}; that
/// matrix is diagonalized with the Jacobi solver and its eigenvectors are
/// mapped back through A^{-1/2}, renormalized and sign normalized. Pairs are
/// sorted by descending eigenvalue.
std::vector<EigenPair> eig_similar_nonsymmetric(double sigma, const DenseMatrix& b);

/// Dense A_sigma^{-1/2}, built column by column from the spectral apply.
DenseMatrix smoother_inv_sqrt_dense(std::size_t n, double sigma);

}  // namespace lsgd
