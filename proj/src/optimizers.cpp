#include "lsgd/optimizers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lsgd/smoothing.hpp"

namespace lsgd {

namespace {

double norm2(std::span<const double> x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double v : x) sum += (v / scale) * (v / scale);
  return scale * std::sqrt(sum);
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

void check_gradient(std::span<const double> grad, const Vector& x) {
  if (!all_finite(grad)) {
    std::ostringstream msg;
    msg << "non-finite gradient at iterate with norm " << x.norm();
    throw NumericError(msg.str());
  }
}

}  // namespace

// -------------------------------------------------------- GradientSource

double GradientSource::value(std::span<const double>) const {
  throw DomainError("GradientSource: objective value not available");
}

Vector GradientSource::eval_gradient(const Vector& x) const {
  if (x.size() != dim()) throw DomainError("GradientSource::eval_gradient: dimension mismatch");
  std::vector<double> out(dim());
  gradient(x.span(), out);
  check_gradient(out, x);
  return Vector(std::move(out));
}

// --------------------------------------------------------- SigmaSchedule

SigmaSchedule SigmaSchedule::constant(double sigma0) {
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0))
    throw DomainError("SigmaSchedule::constant: sigma must be finite and non-negative");
  return SigmaSchedule(Kind::Constant, sigma0, 0, 0);
}

SigmaSchedule SigmaSchedule::ratio(std::size_t offset) {
  return SigmaSchedule(Kind::RatioMonotone, 0.0, 0, offset);
}

SigmaSchedule SigmaSchedule::ratio_then_plateau(std::size_t k0, std::size_t offset) {
  if (k0 == 0) throw DomainError("SigmaSchedule::ratio_then_plateau: k0 must be positive");
  return SigmaSchedule(Kind::RatioThenPlateau, 0.0, k0, offset);
}

SigmaSchedule SigmaSchedule::theorem_default(std::size_t n) {
  const std::size_t w_dim = n >= 1 ? (n - 1) / 2 : 0;
  return ratio_then_plateau(std::max<std::size_t>(n - w_dim + 1, 8));
}

SigmaSchedule SigmaSchedule::parse(const std::string& text, std::size_t offset) {
  auto number_after_colon = [&](const std::string& prefix) -> std::string {
    if (text.size() <= prefix.size()) throw DomainError("schedule '" + text + "': missing value");
    return text.substr(prefix.size());
  };
  if (text == "gd") return constant(0.0);
  if (text == "ratio") return ratio(offset);
  if (text.starts_with("constant:")) {
    const std::string v = number_after_colon("constant:");
    double sigma = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), sigma);
    if (ec != std::errc() || ptr != v.data() + v.size())
      throw DomainError("schedule '" + text + "': bad sigma");
    return constant(sigma);
  }
  if (text.starts_with("plateau:")) {
    const std::string v = number_after_colon("plateau:");
    std::size_t k0 = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), k0);
    if (ec != std::errc() || ptr != v.data() + v.size())
      throw DomainError("schedule '" + text + "': bad k0");
    return ratio_then_plateau(k0, offset);
  }
  throw DomainError("unknown schedule '" + text + "' (expected gd, constant:<s>, ratio, plateau:<k0>)");
}

double SigmaSchedule::operator()(std::size_t k) const noexcept {
  switch (kind_) {
    case Kind::Constant:
      return sigma0_;
    case Kind::RatioMonotone: {
      const double j = static_cast<double>(k + offset_);
      return (j + 1.0) / (j + 2.0);
    }
    case Kind::RatioThenPlateau: {
      const double j = static_cast<double>(std::min(k + offset_, k0_));
      return (j + 1.0) / (j + 2.0);
    }
  }
  return 0.0;
}

double SigmaSchedule::bound() const noexcept {
  switch (kind_) {
    case Kind::Constant:
      return sigma0_;
    case Kind::RatioMonotone:
      return 1.0;
    case Kind::RatioThenPlateau: {
      const double j = static_cast<double>(k0_);
      return (j + 1.0) / (j + 2.0);
    }
  }
  return 0.0;
}

std::string SigmaSchedule::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Constant:
      if (sigma0_ == 0.0) {
        out << "gd";
      } else {
        out << "constant:" << sigma0_;
      }
      break;
    case Kind::RatioMonotone:
      out << "ratio";
      break;
    case Kind::RatioThenPlateau:
      out << "plateau:" << k0_;
      break;
  }
  if (offset_ != 0 && kind_ != Kind::Constant) out << " (offset " << offset_ << ")";
  return out.str();
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ReachedStationary:
      return "ReachedStationary";
    case RunStatus::MaxIters:
      return "MaxIters";
    case RunStatus::Escaped:
      return "Escaped";
  }
  return "unknown";
}

// ------------------------------------------------------------- stepping

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::Thomas:
      return "thomas";
    case SolveMethod::Dft:
      return "dft";
    case SolveMethod::Paired:
      return "paired";
  }
  return "thomas";
}

SolveMethod parse_solve_method(const std::string& text) {
  for (SolveMethod m : {SolveMethod::Thomas, SolveMethod::Dft, SolveMethod::Paired})
    if (to_string(m) == text) return m;
  throw DomainError("unknown solver '" + text + "' (expected thomas, dft or paired)");
}

Vector step_gd(const GradientSource& g, const Vector& x, double eta) {
  Vector grad = g.eval_gradient(x);
  return x - eta * grad;
}

Vector step_mlsgd(const GradientSource& g, const Vector& x, double eta, const SigmaSchedule& sched,
                  std::size_t k) {
  const Vector grad = g.eval_gradient(x);
  const double sigma = sched(k);
  if (sigma == 0.0 || x.size() == 1) return x - eta * grad;
  const CirculantSmoother smoother(x.size(), sigma);
  return x - eta * smoother.solve_thomas(grad);
}

RunResult run(const GradientSource& g, const Vector& x0, const RunConfig& cfg,
              const SigmaSchedule& sched) {
  const std::size_t n = g.dim();
  if (x0.size() != n) throw DomainError("run: x0 dimension does not match the gradient source");
  if (!(cfg.eta > 0.0)) throw DomainError("run: eta must be positive");
  if (!(cfg.escape_radius > 0.0)) throw DomainError("run: escape radius must be positive");
  if (!(cfg.eps_stationary >= 0.0)) throw DomainError("run: eps must be non-negative");

  std::vector<double> x(x0.entries());
  std::vector<double> grad(n);
  std::vector<double> dir(n);
  ThomasWorkspace ws;

  RunResult result{x0, 0, RunStatus::MaxIters, 0.0, std::nullopt, {}};
  if (cfg.record_trajectory) result.trajectory.emplace().push_back(x0);

  auto abort = [&](const std::string& why) {
    result.final_point = Vector(x);
    result.final_grad_norm = result.grad_norms.empty() ? 0.0 : result.grad_norms.back();
    std::ostringstream msg;
    msg << "run aborted at iteration " << result.iterations_used << ": " << why;
    throw RunAborted(msg.str(), std::move(result));
  };

  for (std::size_t k = 0;; ++k) {
    g.gradient(x, grad);
    if (!all_finite(grad)) abort("non-finite gradient");
    const double gnorm = norm2(grad);
    result.grad_norms.push_back(gnorm);
    result.iterations_used = k;

    if (gnorm <= cfg.eps_stationary) {
      result.status = RunStatus::ReachedStationary;
      break;
    }
    if (k == cfg.max_iters) {
      result.status = RunStatus::MaxIters;
      break;
    }

    const double sigma = sched(k);
    if (sigma == 0.0 || n == 1) {
      std::copy(grad.begin(), grad.end(), dir.begin());
    } else {
      const CirculantSmoother smoother(n, sigma);
      switch (cfg.solver) {
        case SolveMethod::Thomas:
          smoother.solve_thomas(grad, dir, ws);
          break;
        case SolveMethod::Dft: {
          const Vector solved = smoother.solve_dft(Vector(grad));
          std::copy(solved.entries().begin(), solved.entries().end(), dir.begin());
          break;
        }
        case SolveMethod::Paired:
          smoother.solve_paired(grad, dir, ws);
          break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) x[i] -= cfg.eta * dir[i];
    if (!all_finite(x)) {
      // Roll back so the partial result holds the last finite iterate.
      for (std::size_t i = 0; i < n; ++i) x[i] += cfg.eta * dir[i];
      abort("non-finite iterate");
    }
    if (cfg.record_trajectory) result.trajectory->push_back(Vector(x));

    if (norm2(x) > cfg.escape_radius) {
      result.iterations_used = k + 1;
      result.status = RunStatus::Escaped;
      g.gradient(x, grad);
      const double final_norm = all_finite(grad) ? norm2(grad) : INFINITY;
      result.grad_norms.push_back(final_norm);
      break;
    }
  }
  result.final_point = Vector(x);
  result.final_grad_norm = result.grad_norms.back();
  return result;
}

double iteration_bound(double C, double ell, double f0, double fstar, double eps) {
  if (!(C >= 0.0)) throw DomainError("iteration_bound: C must be non-negative");
  if (!(ell > 0.0)) throw DomainError("iteration_bound: ell must be positive");
  if (!(f0 >= fstar)) throw DomainError("iteration_bound: f0 must be at least fstar");
  if (!(eps > 0.0)) throw DomainError("iteration_bound: eps must be positive");
  const double a = 1.0 + 4.0 * C;
  return 2.0 * a * a * ell * (f0 - fstar) / ((1.0 + 8.0 * C) * eps * eps);
}

double descent_coefficient(double C, double ell) {
  if (!(C >= 0.0) || !(ell > 0.0)) throw DomainError("descent_coefficient: need C >= 0, ell > 0");
  const double a = 1.0 + 4.0 * C;
  return (1.0 + 8.0 * C) / (2.0 * a * a * ell);
}

}  // namespace lsgd
