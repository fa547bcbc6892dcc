#pragma once

// Gradient descent, Laplacian-smoothed gradient descent and its
// iteration-dependent-sigma variant, all expressed as
//
//   x_{k+1} = x_k - eta * A_{sigma(k)}^{-1} grad f(x_k)
//
// with sigma(k) = 0 giving plain gradient descent.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsgd/errors.hpp"
#include "lsgd/linalg.hpp"

namespace lsgd {

/// Deterministic gradient oracle. Implementations must be safe for
/// concurrent const use.
class GradientSource {
 public:
  virtual ~GradientSource() = default;

  virtual std::size_t dim() const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  virtual bool has_value() const { return false; }
  /// Throws DomainError unless has_value().
  virtual double value(std::span<const double> x) const;

  /// Throws NumericError for a non-finite gradient.
  Vector eval_gradient(const Vector& x) const;
  double eval_value(const Vector& x) const { return value(x.span()); }
};

class SigmaSchedule {
 public:
  enum class Kind { Constant, RatioMonotone, RatioThenPlateau };

  /// sigma(k) = sigma0.
  static SigmaSchedule constant(double sigma0);
  /// sigma(k) = (k + offset + 1) / (k + offset + 2).
  ///
  /// `offset` shifts the counter the ratio is evaluated at; offset 1 evaluates
  /// the first step at sigma = 2/3 (a 1-based iteration counter).
  static SigmaSchedule ratio(std::size_t offset = 0);
  /// Ratio schedule frozen from index k0 on: j = min(k + offset, k0),
  /// sigma = (j + 1) / (j + 2).
  static SigmaSchedule ratio_then_plateau(std::size_t k0, std::size_t offset = 0);
  /// Plateau schedule with k0 = max(n - floor((n-1)/2) + 1, 8).
  static SigmaSchedule theorem_default(std::size_t n);

  /// Parses "gd", "constant:<sigma>", "ratio" or "plateau:<k0>".
  static SigmaSchedule parse(const std::string& text, std::size_t offset = 0);

  double operator()(std::size_t k) const noexcept;
  /// sup_k sigma(k).
  double bound() const noexcept;

  Kind kind() const noexcept { return kind_; }
  double sigma0() const noexcept { return sigma0_; }
  std::size_t k0() const noexcept { return k0_; }
  std::size_t offset() const noexcept { return offset_; }
  std::string describe() const;

 private:
  SigmaSchedule(Kind kind, double sigma0, std::size_t k0, std::size_t offset)
      : kind_(kind), sigma0_(sigma0), k0_(k0), offset_(offset) {}

  Kind kind_;
  double sigma0_;
  std::size_t k0_;
  std::size_t offset_;
};

/// How run() applies A_sigma^{-1}. Paired is slower but keeps the reflection
/// symmetric/antisymmetric subspaces exactly invariant in floating point.
enum class SolveMethod { Thomas, Dft, Paired };

std::string to_string(SolveMethod method);
/// Inverse of to_string ("thomas", "dft", "paired"); throws DomainError.
SolveMethod parse_solve_method(const std::string& text);

struct RunConfig {
  double eta = 0.1;
  std::size_t max_iters = 10000;
  /// Stop once |grad f| <= eps_stationary.
  double eps_stationary = 0.0;
  /// Declare escape once |x| > escape_radius.
  double escape_radius = 1e3;
  bool record_trajectory = false;
  SolveMethod solver = SolveMethod::Thomas;
};

enum class RunStatus { ReachedStationary, MaxIters, Escaped };

std::string to_string(RunStatus status);

struct RunResult {
  Vector final_point;
  std::size_t iterations_used = 0;
  RunStatus status = RunStatus::MaxIters;
  double final_grad_norm = 0.0;
  /// Iterates x_0..x_K when recording was requested.
  std::optional<std::vector<Vector>> trajectory;
  /// |grad f(x_k)| for every iterate; always filled.
  std::vector<double> grad_norms;
};

/// Thrown when an iterate or gradient turns non-finite; carries the partial
/// run up to the last finite iterate.
class RunAborted : public NumericError {
 public:
  RunAborted(const std::string& what, RunResult partial)
      : NumericError(what), partial_(std::move(partial)) {}
  const RunResult& partial() const noexcept { return partial_; }

 private:
  RunResult partial_;
};

/// x - eta * grad f(x).
Vector step_gd(const GradientSource& g, const Vector& x, double eta);

/// x - eta * A_{sigma(k)}^{-1} grad f(x), with the Thomas solver.
Vector step_mlsgd(const GradientSource& g, const Vector& x, double eta, const SigmaSchedule& sched,
                  std::size_t k);

RunResult run(const GradientSource& g, const Vector& x0, const RunConfig& cfg,
              const SigmaSchedule& sched);

/// Worst-case iteration count to reach |grad f| <= eps:
/// 2 (1 + 4C)^2 ell (f0 - fstar) / ((1 + 8C) eps^2).
double iteration_bound(double C, double ell, double f0, double fstar, double eps);

/// Guaranteed per-step decrease coefficient (1 + 8C) / (2 (1 + 4C)^2 ell).
double descent_coefficient(double C, double ell);

}  // namespace lsgd
