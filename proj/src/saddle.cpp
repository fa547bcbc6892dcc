#include "lsgd/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lsgd/similar_eigen.hpp"
#include "lsgd/smoothing.hpp"

namespace lsgd {

namespace {

// Groups consecutive descending eigenpairs whose values differ by less than
// `tie`; returns [begin, end) index ranges.
std::vector<std::pair<std::size_t, std::size_t>> tie_clusters(const std::vector<EigenPair>& pairs,
                                                              double tie) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t start = 0; start < pairs.size();) {
    std::size_t end = start + 1;
    while (end < pairs.size() && pairs[end - 1].value - pairs[end].value < tie) ++end;
    out.emplace_back(start, end);
    start = end;
  }
  return out;
}

ClassifiedPair classify(EigenPair pair) {
  ClassifiedPair c{std::move(pair), EigenClass::Unclassified, 0.0, 0.0};
  c.antisymmetric_residual = antisymmetric_residual(c.pair.vector);
  c.symmetric_residual = symmetric_residual(c.pair.vector);
  if (c.antisymmetric_residual <= kPatternTol) {
    c.cls = EigenClass::AntisymmetricSine;
  } else if (c.symmetric_residual <= kPatternTol) {
    c.cls = c.pair.value < 0.0 ? EigenClass::NegativeMode : EigenClass::Symmetric;
  }
  return c;
}

// Within a cluster of numerically equal eigenvalues any basis is valid; for
// the canonical B both W and V are invariant, so rotate the cluster into its
// W and V parts.
void split_cluster(std::vector<EigenPair>& pairs, std::size_t begin, std::size_t end) {
  std::vector<Vector> w_parts, v_parts;
  for (std::size_t i = begin; i < end; ++i) {
    w_parts.push_back(project_w(pairs[i].vector));
    v_parts.push_back(project_v(pairs[i].vector));
  }
  auto w = gram_schmidt(w_parts, 1e-6);
  auto v = gram_schmidt(v_parts, 1e-6);
  if (w.size() + v.size() != end - begin) return;
  std::size_t i = begin;
  for (auto* group : {&w, &v})
    for (Vector& x : *group) {
      normalize_sign(x);
      pairs[i++].vector = std::move(x);
    }
}

}  // namespace

Vector SubspaceBasis::project(const Vector& x) const {
  Vector out(x.size());
  for (const Vector& q : vectors) out += q.dot(x) * q;
  return out;
}

std::string to_string(EigenClass cls) {
  switch (cls) {
    case EigenClass::AntisymmetricSine:
      return "AntisymmetricSine";
    case EigenClass::Symmetric:
      return "Symmetric";
    case EigenClass::NegativeMode:
      return "NegativeMode";
    case EigenClass::Unclassified:
      return "Unclassified";
  }
  return "Unclassified";
}

std::size_t EigenStructure::count(EigenClass cls) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [&](const ClassifiedPair& p) { return p.cls == cls; }));
}

double antisymmetric_residual(const Vector& x) {
  const std::size_t n = x.size();
  double r = std::abs(x[n - 1]);
  for (std::size_t i = 0; i + 1 < n; ++i) r = std::max(r, std::abs(x[i] + x[n - 2 - i]));
  return r;
}

double symmetric_residual(const Vector& x) {
  const std::size_t n = x.size();
  double r = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) r = std::max(r, std::abs(x[i] - x[n - 2 - i]));
  return r;
}

Vector project_w(const Vector& x) {
  const std::size_t n = x.size();
  Vector w(n);
  for (std::size_t i = 0; i + 1 < n; ++i) w[i] = 0.5 * (x[i] - x[n - 2 - i]);
  return w;
}

Vector project_v(const Vector& x) { return x - project_w(x); }

EigenStructure eigen_structure(const QuadraticObjective& q, double sigma) {
  const DenseMatrix& b = q.hessian_factor();
  EigenStructure es;
  es.sigma = sigma;

  const auto b_pairs = sym_eigendecompose(b);
  const double bnorm = b.frobenius_norm();
  es.degenerate = std::any_of(b_pairs.begin(), b_pairs.end(), [&](const EigenPair& p) {
    return std::abs(p.value) <= 1e-10 * bnorm;
  });

  auto pairs = eig_similar_nonsymmetric(sigma, b);
  const bool canonical = q.is_canonical();
  if (canonical) {
    for (auto [begin, end] : tie_clusters(pairs, 1e-9 * std::max(bnorm, 1.0)))
      if (end - begin > 1) split_cluster(pairs, begin, end);
  }

  for (auto& p : pairs) es.pairs.push_back(classify(std::move(p)));

  if (canonical) {
    for (std::size_t i = 0; i < es.pairs.size(); ++i) {
      const auto& c = es.pairs[i];
      if (c.cls == EigenClass::Unclassified) {
        std::ostringstream msg;
        msg << "eigen_structure: pair " << i << " (lambda = " << c.pair.value
            << ") fits no symmetry pattern; antisymmetric residual " << c.antisymmetric_residual
            << ", symmetric residual " << c.symmetric_residual;
        throw StructuralError(msg.str());
      }
    }
  }
  return es;
}

AttractionSplit canonical_attraction_basis(std::size_t n) {
  if (n < 2) throw DomainError("canonical_attraction_basis: n must be at least 2");
  AttractionSplit split;
  split.w.ambient = split.v.ambient = n;
  const double h = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j = n - 2 - i;
    if (i > j) break;
    if (i == j) {
      split.v.vectors.push_back(Vector::unit(n, i));
      break;
    }
    Vector w(n), v(n);
    w[i] = h;
    w[j] = -h;
    v[i] = h;
    v[j] = h;
    split.w.vectors.push_back(std::move(w));
    split.v.vectors.push_back(std::move(v));
  }
  split.v.vectors.push_back(Vector::unit(n, n - 1));
  return split;
}

DenseMatrix periodic_laplacian(std::size_t n) {
  const DenseMatrix a = CirculantSmoother(n, 1.0).dense();
  DenseMatrix l(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) l(r, c) = (r == c ? 1.0 : 0.0) - a(r, c);
  return l;
}

std::vector<SubspaceBasis> laplacian_eigenspaces(std::size_t n) {
  const auto pairs = sym_eigendecompose(periodic_laplacian(n));
  std::vector<SubspaceBasis> spaces;
  // Distinct Laplacian eigenvalues are separated by O(1/n^2) >> 1e-9.
  for (auto [begin, end] : tie_clusters(pairs, 1e-9)) {
    SubspaceBasis s;
    s.ambient = n;
    for (std::size_t i = begin; i < end; ++i) s.vectors.push_back(pairs[i].vector);
    spaces.push_back(std::move(s));
  }
  return spaces;
}

SubspaceBasis general_attraction_basis(const QuadraticObjective& q, double tol) {
  const DenseMatrix& b = q.hessian_factor();
  const std::size_t n = b.rows();
  if (n < 2) throw DomainError("general_attraction_basis: n must be at least 2");
  const auto pairs = sym_eigendecompose(b);
  const double bnorm = b.frobenius_norm();

  bool has_pos = false, has_neg = false;
  for (const auto& p : pairs) {
    if (std::abs(p.value) <= tol * bnorm) {
      std::ostringstream msg;
      msg << "general_attraction_basis: B has eigenvalue " << p.value
          << " within tolerance of zero; use degenerate_check";
      throw DegenerateHessianError(msg.str());
    }
    has_pos = has_pos || p.value > 0.0;
    has_neg = has_neg || p.value < 0.0;
  }
  if (!has_pos || !has_neg)
    throw DomainError("general_attraction_basis: B must have eigenvalues of both signs");

  const auto l_spaces = laplacian_eigenspaces(n);
  std::vector<Vector> found;
  for (auto [begin, end] : tie_clusters(pairs, 1e-9 * bnorm)) {
    if (pairs[begin].value < 0.0) break;
    SubspaceBasis eig;
    eig.ambient = n;
    for (std::size_t i = begin; i < end; ++i) eig.vectors.push_back(pairs[i].vector);

    for (const SubspaceBasis& f : l_spaces) {
      // Restricted compression Q_E^T P_F Q_E: its eigenvalue-1 eigenvectors
      // span E intersected with F.
      const std::size_t k = eig.dim();
      DenseMatrix m(k, k);
      std::vector<Vector> projected;
      for (const Vector& e : eig.vectors) projected.push_back(f.project(e));
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) m(r, c) = 0.5 * (eig.vectors[r].dot(projected[c]) + eig.vectors[c].dot(projected[r]));
      for (const EigenPair& cand : sym_eigendecompose(m)) {
        if (cand.value < 0.5) continue;
        Vector v(n);
        for (std::size_t r = 0; r < k; ++r) v += cand.vector[r] * eig.vectors[r];
        v = normalized(v);
        if ((v - f.project(v)).norm() <= tol) found.push_back(std::move(v));
      }
    }
  }

  SubspaceBasis out;
  out.ambient = n;
  out.vectors = gram_schmidt(found, tol);
  for (auto& v : out.vectors) normalize_sign(v);
  return out;
}

double nu_rotation(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("nu_rotation: sigma must be positive and finite");
  return (sigma + 1.0 + std::sqrt(2.0 * sigma + 1.0)) / sigma;
}

Vector negative_mode(const QuadraticObjective& q, double sigma) {
  if (!q.is_canonical()) throw DomainError("negative_mode: canonical B required");
  if (!(sigma >= 0.0)) throw DomainError("negative_mode: sigma must be non-negative");
  auto pairs = eig_similar_nonsymmetric(sigma, q.hessian_factor());
  Vector p = pairs.back().vector;
  if (!(pairs.back().value < 0.0))
    throw StructuralError("negative_mode: smallest eigenvalue is not negative");
  normalize_sign(p);
  return p;
}

double pn_sign_property(const QuadraticObjective& q, double sigma1, double sigma2) {
  return negative_mode(q, sigma1).dot(negative_mode(q, sigma2));
}

bool degenerate_check(const QuadraticObjective& q, const Vector& x0, const SigmaSchedule& sched,
                      std::size_t steps, double eta) {
  const DenseMatrix& b = q.hessian_factor();
  if (x0.size() != b.rows()) throw DomainError("degenerate_check: dimension mismatch");
  if ((b * x0).norm() > 1e-10 * b.frobenius_norm() * x0.norm())
    throw DomainError("degenerate_check: x0 is not in the kernel of B");
  Vector x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    x = step_mlsgd(q, x, eta, sched, k);
    if ((x - x0).norm() > 1e-10) return false;
  }
  return true;
}

double max_principal_angle(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.dim() != b.dim() || a.ambient != b.ambient) return std::numbers::pi / 2.0;
  if (a.dim() == 0) return 0.0;
  // sin(theta_max) = |(I - P_b) Q_a|_2, accurate for small angles.
  std::vector<Vector> residual;
  for (const Vector& v : a.vectors) residual.push_back(v - b.project(v));
  const std::size_t k = residual.size();
  DenseMatrix gram(k, k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = r; c < k; ++c) gram(r, c) = gram(c, r) = residual[r].dot(residual[c]);
  double largest = 0.0;
  if (gram.frobenius_norm() > 0.0) largest = std::max(0.0, sym_eigendecompose(gram).front().value);
  return std::asin(std::min(1.0, std::sqrt(largest)));
}

}  // namespace lsgd
