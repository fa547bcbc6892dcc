#pragma once

#include <string>

#include "lsgd/linalg.hpp"
#include "lsgd/optimizers.hpp"

namespace lsgd {

/// f(x) = (c/2) x^T B x with gradient c B x.
class QuadraticObjective : public GradientSource {
 public:
  /// Throws DomainError unless B is square, symmetric within 1e-12 and c > 0.
  explicit QuadraticObjective(DenseMatrix b, double scale_c = 1.0, std::string label = "");

  const DenseMatrix& hessian_factor() const noexcept { return b_; }
  double scale_c() const noexcept { return c_; }
  const std::string& label() const noexcept { return label_; }

  std::size_t dim() const override { return b_.rows(); }
  void gradient(std::span<const double> x, std::span<double> out) const override;
  bool has_value() const override { return true; }
  double value(std::span<const double> x) const override;

  /// True when B = diag(1, ..., 1, -1).
  bool is_canonical() const noexcept;
  /// Short human-readable description for metadata lines.
  std::string describe() const;

 private:
  DenseMatrix b_;
  double c_;
  std::string label_;
};

/// (c/2)(x_1^2 + ... + x_{n-1}^2 - x_n^2). Throws DomainError for n < 2 or c <= 0.
QuadraticObjective canonical_objective(std::size_t n, double c = 1.0);

}  // namespace lsgd
