#include "lsgd/quadratic.hpp"

#include <sstream>

#include "lsgd/errors.hpp"

namespace lsgd {

QuadraticObjective::QuadraticObjective(DenseMatrix b, double scale_c, std::string label)
    : b_(std::move(b)), c_(scale_c), label_(std::move(label)) {
  if (!b_.square()) throw DomainError("QuadraticObjective: B must be square");
  if (!b_.is_symmetric(1e-12)) throw DomainError("QuadraticObjective: B must be symmetric");
  if (!(c_ > 0.0)) throw DomainError("QuadraticObjective: scale c must be positive");
}

void QuadraticObjective::gradient(std::span<const double> x, std::span<double> out) const {
  const std::size_t n = b_.rows();
  if (x.size() != n || out.size() != n) throw DomainError("QuadraticObjective: dimension mismatch");
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) acc += b_(r, c) * x[c];
    out[r] = c_ * acc;
  }
}

double QuadraticObjective::value(std::span<const double> x) const {
  const std::size_t n = b_.rows();
  if (x.size() != n) throw DomainError("QuadraticObjective: dimension mismatch");
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < n; ++c) row += b_(r, c) * x[c];
    acc += x[r] * row;
  }
  return 0.5 * c_ * acc;
}

bool QuadraticObjective::is_canonical() const noexcept {
  const std::size_t n = b_.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double expected = r != c ? 0.0 : (r + 1 == n ? -1.0 : 1.0);
      if (b_(r, c) != expected) return false;
    }
  return true;
}

std::string QuadraticObjective::describe() const {
  if (!label_.empty()) return label_;
  std::ostringstream out;
  if (is_canonical()) {
    out << "canonical n=" << b_.rows() << " c=" << c_;
    return out.str();
  }
  out << "quadratic c=" << c_ << " B=[";
  for (std::size_t r = 0; r < b_.rows(); ++r) {
    out << (r ? ";" : "");
    for (std::size_t c = 0; c < b_.cols(); ++c) out << (c ? " " : "") << b_(r, c);
  }
  out << "]";
  return out.str();
}

QuadraticObjective canonical_objective(std::size_t n, double c) {
  if (n < 2) throw DomainError("canonical_objective: n must be at least 2");
  std::vector<double> d(n, 1.0);
  d.back() = -1.0;
  return QuadraticObjective(DenseMatrix::diagonal(d), c);
}

}  // namespace lsgd
