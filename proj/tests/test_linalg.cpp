#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "lsgd/errors.hpp"
#include "lsgd/linalg.hpp"
#include "lsgd/smoothing.hpp"
#include "lsgd/similar_eigen.hpp"
#include "test_util.hpp"

using namespace lsgd;
using lsgd::testing::random_symmetric;
using lsgd::testing::random_vector;

namespace {

double residual(const DenseMatrix& m, const EigenPair& p) {
  return (m * p.vector - p.value * p.vector).norm();
}

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

}  // namespace

TEST(Vector, RejectsNonFiniteAndEmpty) {
  EXPECT_THROW(Vector(std::vector<double>{}), DomainError);
  EXPECT_THROW((Vector{1.0, NAN}), DomainError);
  EXPECT_THROW((Vector{INFINITY}), DomainError);
}

TEST(Vector, NormAvoidsOverflow) {
  const Vector v{3e200, 4e200};
  EXPECT_DOUBLE_EQ(v.norm(), 5e200);
}

TEST(SymEigen, Identity) {
  const auto pairs = sym_eigendecompose(DenseMatrix::identity(3));
  ASSERT_EQ(pairs.size(), 3u);
  for (const auto& p : pairs) EXPECT_DOUBLE_EQ(p.value, 1.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_NEAR(pairs[i].vector.dot(pairs[j].vector), i == j ? 1.0 : 0.0, 1e-14);
}

TEST(SymEigen, DiagonalGivesStandardBasis) {
  const auto pairs = sym_eigendecompose(DenseMatrix::diagonal({1.0, 1.0, -1.0}));
  EXPECT_DOUBLE_EQ(pairs[0].value, 1.0);
  EXPECT_DOUBLE_EQ(pairs[1].value, 1.0);
  EXPECT_DOUBLE_EQ(pairs[2].value, -1.0);
  EXPECT_EQ(pairs[2].vector, Vector::unit(3, 2));
  EXPECT_NEAR(std::abs(pairs[0].vector[2]), 0.0, 1e-15);
}

TEST(SymEigen, ExampleTwoCoefficientMatrix) {
  const DenseMatrix b{{2.0, 6.0}, {6.0, 4.0}};
  const auto pairs = sym_eigendecompose(b);
  EXPECT_NEAR(pairs[0].value, 3.0 + std::sqrt(37.0), 1e-13);
  EXPECT_NEAR(pairs[1].value, 3.0 - std::sqrt(37.0), 1e-13);
  for (const auto& p : pairs) {
    EXPECT_LE(residual(b, p), 1e-12 * b.frobenius_norm());
    EXPECT_GT(p.vector[0], 0.0);  // sign normalization
  }
}

TEST(SymEigen, RejectsBadInput) {
  EXPECT_THROW(sym_eigendecompose(DenseMatrix(2, 3)), DomainError);
  EXPECT_THROW(sym_eigendecompose(DenseMatrix{{1.0, 2.0}, {0.0, 1.0}}), DomainError);
}

TEST(SymEigen, RandomMatricesAgainstEigenOracle) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u, 32u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const DenseMatrix m = random_symmetric(rng, n);
      const double mnorm = m.frobenius_norm();
      const auto pairs = sym_eigendecompose(m, 1e-12);
      ASSERT_EQ(pairs.size(), n);

      double trace = 0.0, sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
      for (const auto& p : pairs) sum += p.value;
      EXPECT_NEAR(trace, sum, 1e-9 * mnorm);

      // Determinant sign equals the product of eigenvalue signs.
      const double det = to_eigen(m).determinant();
      int sign = 1;
      for (const auto& p : pairs) sign *= p.value < 0 ? -1 : 1;
      EXPECT_EQ(det < 0 ? -1 : 1, sign);

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(m));
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(pairs[i].value, oracle.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i)),
                    1e-10 * mnorm);
        EXPECT_LE(residual(m, pairs[i]), 1e-11 * mnorm);
        EXPECT_NEAR(pairs[i].vector.norm(), 1.0, 1e-12);
        for (std::size_t j = i + 1; j < n; ++j)
          EXPECT_NEAR(pairs[i].vector.dot(pairs[j].vector), 0.0, 1e-11);
        if (i + 1 < n) EXPECT_GE(pairs[i].value, pairs[i + 1].value);
      }
    }
  }
}

TEST(SymEigen, DegenerateLaplacianBlocksStayOrthonormal) {
  // Periodic Laplacian eigenvalues come in equal pairs.
  const DenseMatrix a = CirculantSmoother(12, 1.0).dense();
  const auto pairs = sym_eigendecompose(a);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = 0; j < pairs.size(); ++j)
      EXPECT_NEAR(pairs[i].vector.dot(pairs[j].vector), i == j ? 1.0 : 0.0, 1e-12);
}

TEST(DenseSolve, TrivialCases) {
  const Vector y{3.0, -1.0, 2.0};
  EXPECT_EQ(dense_solve(DenseMatrix::identity(3), y), y);
  const Vector x = dense_solve(DenseMatrix::diagonal({2.0, 4.0}), Vector{2.0, 4.0});
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
}

TEST(DenseSolve, CirculantUnitRightHandSide) {
  const DenseMatrix a = CirculantSmoother(4, 1.0).dense();
  const Vector x = dense_solve(a, Vector::unit(4, 0));
  const Vector expected{7.0 / 15.0, 1.0 / 5.0, 2.0 / 15.0, 1.0 / 5.0};
  EXPECT_LE(lsgd::testing::max_abs_diff(x, expected), 1e-15);
  EXPECT_LE((a * x - Vector::unit(4, 0)).norm(), 1e-15);
}

TEST(DenseSolve, SingularReportsPivot) {
  const DenseMatrix m{{1.0, 2.0}, {2.0, 4.0}};
  try {
    dense_solve(m, Vector{1.0, 1.0});
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_EQ(e.pivot_index(), 1u);
  }
}

TEST(DenseSolve, RandomWellConditionedSystems) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = dim(rng);
    DenseMatrix m = random_symmetric(rng, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 2.0 * std::sqrt(static_cast<double>(n)) + 1.0;
    const Vector y = random_vector(rng, n);
    const Vector x = dense_solve(m, y);
    EXPECT_LE((m * x - y).norm(), 1e-10 * (m.frobenius_norm() * x.norm() + y.norm()));
  }
}

TEST(SimilarEigen, SigmaZeroMatchesSymmetricSolver) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {2u, 3u, 6u, 9u}) {
    const DenseMatrix b = random_symmetric(rng, n);
    const auto direct = sym_eigendecompose(b);
    const auto similar = eig_similar_nonsymmetric(0.0, b);
    ASSERT_EQ(direct.size(), similar.size());
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(direct[i].value, similar[i].value, 1e-9);
      EXPECT_NEAR(std::abs(direct[i].vector.dot(similar[i].vector)), 1.0, 1e-9);
    }
  }
}

TEST(SimilarEigen, DiagonalTwoByTwoAtSigmaZero) {
  const auto pairs = eig_similar_nonsymmetric(0.0, DenseMatrix::diagonal({1.0, -1.0}));
  EXPECT_DOUBLE_EQ(pairs[0].value, 1.0);
  EXPECT_EQ(pairs[0].vector, (Vector{1.0, 0.0}));
  EXPECT_DOUBLE_EQ(pairs[1].value, -1.0);
  EXPECT_EQ(pairs[1].vector, (Vector{0.0, 1.0}));
}

TEST(SimilarEigen, ResidualsAgainstDenseProduct) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 4u, 7u, 16u}) {
    for (double sigma : {0.3, 1.0, 10.0}) {
      const DenseMatrix b = random_symmetric(rng, n);
      const DenseMatrix a = CirculantSmoother(n, sigma).dense();
      for (const auto& p : eig_similar_nonsymmetric(sigma, b)) {
        const Vector lhs = dense_solve(a, b * p.vector);
        EXPECT_LE((lhs - p.value * p.vector).norm(), 1e-8);
        EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
      }
    }
  }
}

TEST(SimilarEigen, CanonicalFourSineMode) {
  const DenseMatrix b = DenseMatrix::diagonal({1.0, 1.0, 1.0, -1.0});
  const auto pairs = eig_similar_nonsymmetric(1.0, b);
  const Vector expected = normalized(Vector{1.0, 0.0, -1.0, 0.0});
  bool found = false;
  for (const auto& p : pairs) {
    if (std::abs(p.value - 1.0 / 3.0) < 1e-10 && std::abs(std::abs(p.vector.dot(expected)) - 1.0) < 1e-10)
      found = true;
  }
  EXPECT_TRUE(found);
  int negatives = 0;
  for (const auto& p : pairs) negatives += p.value < 0 ? 1 : 0;
  EXPECT_EQ(negatives, 1);
}
