#pragma once

// Small dense linear algebra: vectors, row-major matrices, a cyclic Jacobi
// symmetric eigensolver and a partial-pivot dense solver. Everything here is
// deliberately plain; it is the reference the structured solvers are checked
// against.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lsgd {

class Vector {
 public:
  /// Zero vector of dimension n (n >= 1).
  explicit Vector(std::size_t n);
  Vector(std::initializer_list<double> entries);
  explicit Vector(std::vector<double> entries);

  static Vector unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> span() const noexcept { return data_; }
  std::span<double> span() noexcept { return data_; }
  const std::vector<double>& entries() const noexcept { return data_; }

  double norm() const noexcept;
  double dot(const Vector& other) const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s) noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);

/// Returns v / |v|. Throws DomainError for the zero vector.
Vector normalized(const Vector& v);

class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Row-major construction from nested lists; all rows must share a length.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const std::vector<double>& d);
  /// Matrix whose columns are the given vectors.
  static DenseMatrix from_columns(const std::vector<Vector>& cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const;
  DenseMatrix transpose() const;
  double frobenius_norm() const noexcept;
  /// max |a_ij - a_ji| / max(1, |A|_F) <= rel_tol.
  bool is_symmetric(double rel_tol = 1e-12) const noexcept;

  Vector operator*(const Vector& x) const;
  DenseMatrix operator*(const DenseMatrix& other) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct EigenPair {
  double value;
  Vector vector;
};

/// Flips v so that its first entry with |entry| > 1e-10 is positive.
void normalize_sign(Vector& v);

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations, sorted by
/// descending eigenvalue. Eigenvectors are unit length and sign normalized;
/// numerically tied eigenvalues get a Gram-Schmidt orthonormalized block.
///
/// Throws DomainError for non-square or asymmetric input and
/// ConvergenceError if 30 sweeps do not drive the off-diagonal mass below
/// tol * |m|_F.
std::vector<EigenPair> sym_eigendecompose(const DenseMatrix& m, double tol = 1e-12);

/// Solves m x = y by LU with partial pivoting. Throws SingularityError when a
/// pivot falls below 1e-13 * |m|_F.
Vector dense_solve(const DenseMatrix& m, const Vector& y);

/// Orthonormalizes `vs` in order, dropping vectors whose residual after
/// projection is below `drop_tol` (relative to the vector's original norm).
std::vector<Vector> gram_schmidt(const std::vector<Vector>& vs, double drop_tol = 1e-8);

}  // namespace lsgd
