#include "lsgd/similar_eigen.hpp"

#include "lsgd/errors.hpp"
#include "lsgd/smoothing.hpp"

namespace lsgd {

DenseMatrix smoother_inv_sqrt_dense(std::size_t n, double sigma) {
  const CirculantSmoother smoother(n, sigma);
  std::vector<Vector> cols;
  cols.reserve(n);
  for (std::size_t j = 0; j < n; ++j) cols.push_back(smoother.inv_sqrt_apply(Vector::unit(n, j)));
  return DenseMatrix::from_columns(cols);
}

std::vector<EigenPair> eig_similar_nonsymmetric(double sigma, const DenseMatrix& b) {
  if (!b.square() || !b.is_symmetric(1e-12))
    throw DomainError("eig_similar_nonsymmetric: B must be square and symmetric");
  const std::size_t n = b.rows();
  const DenseMatrix h = smoother_inv_sqrt_dense(n, sigma);
  DenseMatrix s = h * b * h;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));

  auto pairs = sym_eigendecompose(s);
  for (auto& p : pairs) {
    Vector v = normalized(h * p.vector);
    normalize_sign(v);
    p.vector = std::move(v);
  }
  return pairs;
}

}  // namespace lsgd
