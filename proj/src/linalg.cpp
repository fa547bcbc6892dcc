#include "lsgd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "lsgd/errors.hpp"

namespace lsgd {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      std::ostringstream msg;
      msg << what << ": non-finite entry at index " << i;
      throw DomainError(msg.str());
    }
  }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(std::size_t n) : data_(n, 0.0) {
  if (n == 0) throw DomainError("Vector: dimension must be at least 1");
}

Vector::Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

Vector::Vector(std::vector<double> entries) : data_(std::move(entries)) {
  if (data_.empty()) throw DomainError("Vector: dimension must be at least 1");
  require_finite(data_, "Vector");
}

Vector Vector::unit(std::size_t n, std::size_t i) {
  Vector e(n);
  if (i >= n) throw DomainError("Vector::unit: index out of range");
  e[i] = 1.0;
  return e;
}

double Vector::norm() const noexcept {
  // Scaled accumulation keeps huge and tiny entries from over/underflowing.
  double scale = 0.0;
  for (double x : data_) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : data_) {
    const double t = x / scale;
    sum += t * t;
  }
  return scale * std::sqrt(sum);
}

double Vector::dot(const Vector& other) const {
  require_same_size(size(), other.size(), "Vector::dot");
  return std::inner_product(data_.begin(), data_.end(), other.data_.begin(), 0.0);
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector::operator+=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector::operator-=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) noexcept {
  for (double& x : data_) x *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }

Vector normalized(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) throw DomainError("normalized: zero vector");
  return (1.0 / n) * v;
}

// ----------------------------------------------------------- DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw DomainError("DenseMatrix: dimensions must be positive");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  if (rows_ == 0 || cols_ == 0) throw DomainError("DenseMatrix: dimensions must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DomainError("DenseMatrix: ragged row list");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  require_finite(d, "DenseMatrix::diagonal");
  return m;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vector>& cols) {
  if (cols.empty()) throw DomainError("DenseMatrix::from_columns: no columns");
  DenseMatrix m(cols.front().size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    require_same_size(cols[c].size(), m.rows(), "DenseMatrix::from_columns");
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Vector DenseMatrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double DenseMatrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (double x : data_) sum += x * x;
  return std::sqrt(sum);
}

bool DenseMatrix::is_symmetric(double rel_tol) const noexcept {
  if (!square()) return false;
  const double scale = std::max(1.0, frobenius_norm());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if (std::abs((*this)(r, c) - (*this)(c, r)) > rel_tol * scale) return false;
  return true;
}

Vector DenseMatrix::operator*(const Vector& x) const {
  require_same_size(cols_, x.size(), "DenseMatrix * Vector");
  Vector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  require_same_size(cols_, other.rows_, "DenseMatrix * DenseMatrix");
  DenseMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(r, k);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) out(r, c) += a * other(k, c);
    }
  return out;
}

// ------------------------------------------------------------ eigensolver

void normalize_sign(Vector& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-10) {
      if (v[i] < 0) v *= -1.0;
      return;
    }
  }
}

std::vector<Vector> gram_schmidt(const std::vector<Vector>& vs, double drop_tol) {
  std::vector<Vector> out;
  for (const Vector& v : vs) {
    const double original = v.norm();
    if (original == 0.0) continue;
    Vector w = v;
    // Two passes of modified Gram-Schmidt for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : out) w -= q.dot(w) * q;
    const double residual = w.norm();
    if (residual <= drop_tol * original) continue;
    out.push_back((1.0 / residual) * w);
  }
  return out;
}

std::vector<EigenPair> sym_eigendecompose(const DenseMatrix& m, double tol) {
  if (!m.square()) throw DomainError("sym_eigendecompose: matrix is not square");
  if (!m.is_symmetric(1e-12)) throw DomainError("sym_eigendecompose: matrix is not symmetric");

  const std::size_t n = m.rows();
  const double mnorm = m.frobenius_norm();
  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 30;
  const double target = tol * mnorm;
  // Past the requested tolerance, keep sweeping while the off-diagonal still
  // shrinks: eigenvector error scales like off / gap, so close eigenvalues
  // need the extra sweep.
  double off = off_norm();
  double prev_off = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < kMaxSweeps && off > 0.0 && (off > target || off < 0.5 * prev_off); ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    prev_off = off;
    off = off_norm();
  }
  const double residual = off;
  if (residual > target) {
    std::ostringstream msg;
    msg << "sym_eigendecompose: no convergence after " << kMaxSweeps
        << " sweeps, off-diagonal norm " << residual;
    throw ConvergenceError(msg.str(), residual);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  std::vector<EigenPair> pairs;
  pairs.reserve(n);
  for (std::size_t idx : order) pairs.push_back({a(idx, idx), normalized(v.column(idx))});

  // Re-orthonormalize clusters of tied eigenvalues.
  const double tie = 1e-9 * std::max(mnorm, 1e-300);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && pairs[end - 1].value - pairs[end].value < tie) ++end;
    if (end - start > 1) {
      std::vector<Vector> block;
      for (std::size_t i = start; i < end; ++i) block.push_back(pairs[i].vector);
      auto ortho = gram_schmidt(block, 0.0);
      for (std::size_t i = start; i < end && i - start < ortho.size(); ++i)
        pairs[i].vector = ortho[i - start];
    }
    start = end;
  }
  for (auto& p : pairs) normalize_sign(p.vector);
  return pairs;
}

// ----------------------------------------------------------- dense solve

Vector dense_solve(const DenseMatrix& m, const Vector& y) {
  if (!m.square()) throw DomainError("dense_solve: matrix is not square");
  require_same_size(m.rows(), y.size(), "dense_solve");
  const std::size_t n = m.rows();
  const double threshold = 1e-13 * m.frobenius_norm();

  DenseMatrix a = m;
  std::vector<double> b(y.entries());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
    if (!(std::abs(a(piv, k)) > threshold)) {
      std::ostringstream msg;
      msg << "dense_solve: singular to tolerance at pivot " << k << " (|pivot| = "
          << std::abs(a(piv, k)) << ")";
      throw SingularityError(msg.str(), k);
    }
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
      b[r] -= f * b[k];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace lsgd
