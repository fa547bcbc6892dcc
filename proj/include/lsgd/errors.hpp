#pragma once

#include <stdexcept>
#include <string>

namespace lsgd {

/// Violated precondition (shape mismatch, out-of-range parameter, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Elimination hit a pivot below tolerance.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, std::size_t pivot_index)
      : std::runtime_error(what), pivot_index_(pivot_index) {}
  std::size_t pivot_index() const noexcept { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

/// Non-finite value produced during an iteration.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An eigenvector fits none of the expected symmetry patterns.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lsgd
