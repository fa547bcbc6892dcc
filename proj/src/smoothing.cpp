#include "lsgd/smoothing.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lsgd/dft.hpp"
#include "lsgd/errors.hpp"

namespace lsgd {

namespace {

void check_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << expected << ", got " << got;
    throw DomainError(msg.str());
  }
}

}  // namespace

CirculantSmoother::CirculantSmoother(std::size_t n, double sigma) : n_(n), sigma_(sigma) {
  if (n < 2) throw DomainError("CirculantSmoother: n must be at least 2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw DomainError("CirculantSmoother: sigma must be finite and non-negative");
  // Thomas sweeps run without pivoting; the modified tridiagonal part must be
  // strictly diagonally dominant.
  const double diag = 1.0 + 2.0 * sigma_;
  const double first = 2.0 * diag;
  const double last = diag + sigma_ * sigma_ / diag;
  if (n_ >= 3 && !(diag > 2.0 * sigma_ && first > sigma_ && last > sigma_))
    throw DomainError("CirculantSmoother: tridiagonal part is not diagonally dominant");
}

DenseMatrix CirculantSmoother::dense() const {
  DenseMatrix a(n_, n_);
  if (n_ == 2) {
    a(0, 0) = a(1, 1) = 1.0 + sigma_;
    a(0, 1) = a(1, 0) = -sigma_;
    return a;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    a(i, i) = 1.0 + 2.0 * sigma_;
    a(i, (i + 1) % n_) = -sigma_;
    a(i, (i + n_ - 1) % n_) = -sigma_;
  }
  return a;
}

SmootherSpectrum CirculantSmoother::spectrum() const {
  SmootherSpectrum s;
  s.values.resize(n_);
  if (n_ == 2) {
    s.values = {1.0, 1.0 + 2.0 * sigma_};
    return s;
  }
  for (std::size_t k = 0; k < n_; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
    // 2 - 2cos(t) = 4 sin^2(t/2) avoids cancellation near k = 0.
    const double half = std::sin(0.5 * angle);
    s.values[k] = 1.0 + sigma_ * 4.0 * half * half;
  }
  return s;
}

Vector CirculantSmoother::apply(const Vector& x) const {
  check_dim(n_, x.size(), "CirculantSmoother::apply");
  Vector y(n_);
  if (n_ == 2) {
    y[0] = (1.0 + sigma_) * x[0] - sigma_ * x[1];
    y[1] = (1.0 + sigma_) * x[1] - sigma_ * x[0];
    return y;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const double left = x[(i + n_ - 1) % n_];
    const double right = x[(i + 1) % n_];
    y[i] = (1.0 + 2.0 * sigma_) * x[i] - sigma_ * (left + right);
  }
  return y;
}

Vector CirculantSmoother::spectral_apply(const Vector& x, double exponent) const {
  const auto spec = spectrum();
  auto coeffs = dft::forward_real(x.span());
  for (std::size_t k = 0; k < n_; ++k) coeffs[k] *= std::pow(spec.values[k], exponent);
  const auto back = dft::inverse(coeffs);

  Vector out(n_);
  double imag_sq = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    out[i] = back[i].real();
    imag_sq += back[i].imag() * back[i].imag();
  }
  const double bound = 1e-10 * std::max(x.norm(), 1e-300);
  if (std::sqrt(imag_sq) > bound) {
    std::ostringstream msg;
    msg << "CirculantSmoother: spectral apply left imaginary residue " << std::sqrt(imag_sq);
    throw NumericError(msg.str());
  }
  return out;
}

Vector CirculantSmoother::solve_dft(const Vector& y) const {
  check_dim(n_, y.size(), "CirculantSmoother::solve_dft");
  if (sigma_ == 0.0) return y;
  return spectral_apply(y, -1.0);
}

Vector CirculantSmoother::inv_sqrt_apply(const Vector& x) const {
  check_dim(n_, x.size(), "CirculantSmoother::inv_sqrt_apply");
  if (sigma_ == 0.0) return x;
  return spectral_apply(x, -0.5);
}

Vector CirculantSmoother::solve_thomas(const Vector& y) const {
  check_dim(n_, y.size(), "CirculantSmoother::solve_thomas");
  Vector x(n_);
  ThomasWorkspace ws;
  solve_thomas(y.span(), x.span(), ws);
  return x;
}

std::vector<double> CirculantSmoother::inverse_kernel() const {
  std::vector<double> g = solve_dft(Vector::unit(n_, 0)).entries();
  for (std::size_t d = 1; d < n_ - d; ++d) g[d] = g[n_ - d] = 0.5 * (g[d] + g[n_ - d]);
  return g;
}

Vector CirculantSmoother::solve_paired(const Vector& y) const {
  Vector out(y.size());
  ThomasWorkspace ws;
  solve_paired(y.span(), out.span(), ws);
  return out;
}

void CirculantSmoother::solve_paired(std::span<const double> y, std::span<double> out,
                                     ThomasWorkspace& ws) const {
  check_dim(n_, y.size(), "CirculantSmoother::solve_paired");
  check_dim(n_, out.size(), "CirculantSmoother::solve_paired");
  const std::size_t n = n_;
  ws.kernel = inverse_kernel();
  const auto& g = ws.kernel;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = g[0] * y[i];
    std::size_t d = 1;
    for (; d < n - d; ++d) acc += g[d] * (y[(i + n - d) % n] + y[(i + d) % n]);
    if (d == n - d) acc += g[d] * y[(i + d) % n];
    out[i] = acc;
  }
}

void CirculantSmoother::solve_thomas(std::span<const double> y, std::span<double> out,
                                     ThomasWorkspace& ws) const {
  check_dim(n_, y.size(), "CirculantSmoother::solve_thomas");
  check_dim(n_, out.size(), "CirculantSmoother::solve_thomas");
  const double s = sigma_;
  if (n_ == 2) {
    const double inv_det = 1.0 / (1.0 + 2.0 * s);
    const double y0 = y[0];
    const double y1 = y[1];
    out[0] = ((1.0 + s) * y0 + s * y1) * inv_det;
    out[1] = (s * y0 + (1.0 + s) * y1) * inv_det;
    return;
  }

  const std::size_t n = n_;
  const double diag = 1.0 + 2.0 * s;
  const double off = -s;
  // A = T + u v^T with u = (gamma, 0, ..., 0, corner), v = (1, 0, ..., 0, corner / gamma).
  const double corner = -s;
  const double gamma = -diag;
  const double first = diag - gamma;
  const double last = diag - corner * corner / gamma;

  ws.cprime.resize(n);
  ws.z.resize(n);
  ws.q.resize(n);

  // Forward sweep shared by both right-hand sides; T is symmetric with
  // constant off-diagonal `off`.
  auto diag_at = [&](std::size_t i) { return i == 0 ? first : (i == n - 1 ? last : diag); };
  double denom = diag_at(0);
  ws.cprime[0] = off / denom;
  ws.z[0] = y[0] / denom;
  ws.q[0] = gamma / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag_at(i) - off * ws.cprime[i - 1];
    ws.cprime[i] = off / denom;
    const double u_i = (i == n - 1) ? corner : 0.0;
    ws.z[i] = (y[i] - off * ws.z[i - 1]) / denom;
    ws.q[i] = (u_i - off * ws.q[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    ws.z[i] -= ws.cprime[i] * ws.z[i + 1];
    ws.q[i] -= ws.cprime[i] * ws.q[i + 1];
  }

  const double v_last = corner / gamma;
  const double vz = ws.z[0] + v_last * ws.z[n - 1];
  const double vq = ws.q[0] + v_last * ws.q[n - 1];
  const double factor = vz / (1.0 + vq);
  for (std::size_t i = 0; i < n; ++i) out[i] = ws.z[i] - factor * ws.q[i];
}

}  // namespace lsgd
