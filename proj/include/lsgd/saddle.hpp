#pragma once

// Saddle-point analysis for quadratic objectives under Laplacian smoothing.
//
// Index convention. The symmetry patterns are naturally stated with 1-based
// indices l = 1..n, pairing x_l with x_{n-l} and treating x_n separately.
// In 0-based storage that is: entry i (i = 0..n-2) pairs with entry n-2-i,
// and the last entry n-1 is the unpaired one. Every function below uses this
// translation.
//
//   W (antisymmetric): x[i] = -x[n-2-i] for i <= n-2, x[n-1] = 0
//   V (symmetric):     x[i] =  x[n-2-i] for i <= n-2, x[n-1] free

#include <cstddef>
#include <string>
#include <vector>

#include "lsgd/errors.hpp"
#include "lsgd/linalg.hpp"
#include "lsgd/optimizers.hpp"
#include "lsgd/quadratic.hpp"

namespace lsgd {

/// Raised when a Hessian has a zero eigenvalue where a strict saddle is
/// required; see degenerate_check for that case.
class DegenerateHessianError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct SubspaceBasis {
  std::vector<Vector> vectors;
  std::size_t ambient = 0;

  std::size_t dim() const noexcept { return vectors.size(); }
  /// Orthogonal projection of x onto the span.
  Vector project(const Vector& x) const;
};

enum class EigenClass { AntisymmetricSine, Symmetric, NegativeMode, Unclassified };

std::string to_string(EigenClass cls);

struct ClassifiedPair {
  EigenPair pair;
  EigenClass cls = EigenClass::Unclassified;
  /// max deviation from the W pattern (including |x[n-1]|).
  double antisymmetric_residual = 0.0;
  /// max deviation from the V pattern.
  double symmetric_residual = 0.0;
};

struct EigenStructure {
  double sigma = 0.0;
  /// Eigenpairs of A_sigma^{-1} B (B without the scale c), descending.
  std::vector<ClassifiedPair> pairs;
  /// B has an eigenvalue with |lambda| <= 1e-10 |B|.
  bool degenerate = false;

  std::size_t count(EigenClass cls) const noexcept;
};

/// Pattern tolerance used for eigenvector classification and span tests.
inline constexpr double kPatternTol = 1e-8;

double antisymmetric_residual(const Vector& x);
double symmetric_residual(const Vector& x);
/// Orthogonal projections onto W and V.
Vector project_w(const Vector& x);
Vector project_v(const Vector& x);

/// Eigenpairs of A_sigma^{-1} B with their symmetry classification. For the
/// canonical B, a pair that fits no pattern raises StructuralError.
EigenStructure eigen_structure(const QuadraticObjective& q, double sigma);

/// Orthonormal bases of W (dim floor((n-1)/2)) and V (the complement).
struct AttractionSplit {
  SubspaceBasis w;
  SubspaceBasis v;
};
AttractionSplit canonical_attraction_basis(std::size_t n);

/// Directions p among the positive-eigenvalue eigenvectors of B for which
/// L p is parallel to p (L the periodic Laplacian). Repeated positive
/// eigenvalues are handled by intersecting the eigenspace with each
/// eigenspace of L, which does not depend on the eigenbasis chosen.
///
/// Throws DegenerateHessianError if B has an eigenvalue within tol * |B|
/// of zero, DomainError if B lacks a positive or a negative eigenvalue.
SubspaceBasis general_attraction_basis(const QuadraticObjective& q, double tol = kPatternTol);

/// Dense periodic Laplacian L (n = 2: [[-1, 1], [1, -1]]).
DenseMatrix periodic_laplacian(std::size_t n);

/// Eigenspaces of the periodic Laplacian as orthonormal bases.
std::vector<SubspaceBasis> laplacian_eigenspaces(std::size_t n);

/// nu(sigma) = (sigma + 1 + sqrt(2 sigma + 1)) / sigma, the slope of the
/// positive eigenvector of the 2x2 canonical problem. Throws for sigma <= 0.
double nu_rotation(double sigma);

/// Sign-normalized negative-mode eigenvector of A_sigma^{-1} B for the
/// canonical B.
Vector negative_mode(const QuadraticObjective& q, double sigma);

/// Inner product of the negative-mode eigenvectors at two sigmas.
double pn_sign_property(const QuadraticObjective& q, double sigma1, double sigma2);

/// Runs `steps` smoothed steps from x0 (which must satisfy B x0 = 0 to
/// within 1e-10 |B| |x0|) and reports whether every iterate stays at x0
/// within 1e-10. Throws DomainError if x0 is not in the kernel of B.
bool degenerate_check(const QuadraticObjective& q, const Vector& x0, const SigmaSchedule& sched,
                      std::size_t steps, double eta = 0.1);

/// Largest principal angle (radians) between two subspaces of equal ambient
/// dimension; pi/2 if the dimensions differ.
double max_principal_angle(const SubspaceBasis& a, const SubspaceBasis& b);

}  // namespace lsgd
