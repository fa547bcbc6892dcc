#pragma once

#include <cmath>
#include <random>

#include "lsgd/linalg.hpp"

namespace lsgd::testing {

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline DenseMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) m(r, c) = m(c, r) = normal(rng);
  return m;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double rel_diff(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace lsgd::testing
